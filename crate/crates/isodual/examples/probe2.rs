use isodual::density::shortest_vectors;
use isodual::geometry::siegel_embed;
use nalgebra::DMatrix;

fn main() {
    // look for sigma_2(X/2 + iI/sqrt(2)) with minimum sqrt(2)
    let y = DMatrix::from_row_slice(2, 2, &[1.0 / 2f64.sqrt(), 0.0, 0.0, 1.0 / 2f64.sqrt()]);
    for (a, b, d) in [(1.0, 1.0, -1.0), (1.0, 1.0, 1.0), (0.0, 1.0, 0.0), (1.0, 0.0, -1.0), (1.0, 0.0, 1.0), (-1.0, 1.0, 1.0)] {
        let x = DMatrix::from_row_slice(2, 2, &[a / 2.0, b / 2.0, b / 2.0, d / 2.0]);
        if let Ok(g) = siegel_embed(&x, &y) {
            let sv = shortest_vectors(&g).unwrap();
            println!("X=[[{a},{b}],[{b},{d}]]/2: min={:.10} pairs={}", sv.min, sv.count_pairs);
        }
    }
}
