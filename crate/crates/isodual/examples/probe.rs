//! Dev probe: check catalog gram claims (membership, minima, pair counts).
use isodual::catalog::Catalog;
use isodual::density::shortest_vectors;
use isodual::geometry::{membership_residual, klein_embed};
use nalgebra::DMatrix;

fn main() {
    let cat = Catalog::load_embedded().unwrap();
    let checks = [
        ("A_2", "F_2"), ("Klein11_max", "I_{1,1}"), ("Lambda_3", "G_3"),
        ("D_4", "L_4"), ("D_4", "I_{2,2}"), ("Lambda_4", "G_4"),
        ("Lambda_4p", "M_4"), ("Lambda_5", "I_{4,1}"), ("Lambda_5b", "I_{3,2}"),
        ("Lambda_5c", "I_1+F_4"), ("Lambda_5p", "F_5"), ("W_6", "J_6"),
        ("Lorentz_6", "I_{5,1}"), ("Lambda_7", "I_{6,1}"), ("Lambda_7p", "H_7"),
        ("F6_base", "F_6"), ("A_0", "I_1+G_6"), ("K4G3_max", "K_4+G_3"),
        ("D4_siegel", "J_4"), ("Lambda_4_even", "U_4"), ("F4_max", "F_4"),
        ("F6_max", "F_6"),
    ];
    for (g, f) in checks {
        let gram = match cat.gram(g) { Ok(x) => x, Err(e) => { println!("{g:<16} LOAD ERR {e}"); continue } };
        let fm = cat.matrix(f).unwrap();
        let res = membership_residual(&gram, &fm);
        let sv = shortest_vectors(&gram);
        match (res, sv) {
            (Some(r), Ok(s)) => println!("{g:<16} in V_{f:<10} res={r:.2e} det={:+.6e} min={:.10} pairs={}", gram.det()-1.0, s.min, s.count_pairs),
            (r, s) => println!("{g:<16} res={r:?} sv_err={:?}", s.err().map(|e| e.to_string())),
        }
    }
    // D_4 = phi_{2,2}((1-1/sqrt(2))X) for X candidates
    let d4 = cat.gram("D_4").unwrap();
    let c = 1.0 - 1.0 / 2f64.sqrt();
    for (label, x) in [
        ("[[1,-1],[1,1]]", DMatrix::from_row_slice(2,2,&[1.0,-1.0,1.0,1.0])),
        ("[[1,1],[-1,1]]", DMatrix::from_row_slice(2,2,&[1.0,1.0,-1.0,1.0])),
        ("[[1,1],[1,-1]]", DMatrix::from_row_slice(2,2,&[1.0,1.0,1.0,-1.0])),
    ] {
        if let Ok(a) = klein_embed(2,2,&(x*c)) {
            let diff = (a.mat() - d4.mat()).amax();
            println!("phi22((1-1/sqrt2)*{label}) vs D_4: max diff {diff:.2e}");
        }
    }
    // H_z0w0 six-dimensional ball witness
    let h = cat.gram("H_z0w0").unwrap();
    let sv = shortest_vectors(&h).unwrap();
    println!("H_z0w0 6x6: det={:+.3e} min={:.10} pairs={} (phi={:.10})", h.det()-1.0, sv.min, sv.count_pairs, 1.0+(6f64.sqrt()-2f64.sqrt())/2.0);
}
