//! Fixtures shared by the benchmarks in `benches/`.

use wld_core::enumerate::random_corpus;
use wld_core::Diagram;

/// The two worked examples plus a reproducible batch of larger diagrams.
pub fn fixtures() -> Vec<(String, Diagram)> {
    let mut out = vec![
        (
            "n8_k4".to_string(),
            Diagram::from_pairs(8, &[[1, 4], [2, 4], [5, 7], [5, 8]]).expect("valid"),
        ),
        (
            "n7_k3".to_string(),
            Diagram::from_pairs(7, &[[1, 6], [1, 5], [1, 4]]).expect("valid"),
        ),
    ];
    for w in random_corpus(17, 3, 12, 12) {
        out.push((format!("n{}_k{}", w.n(), w.k()), w));
    }
    out
}
