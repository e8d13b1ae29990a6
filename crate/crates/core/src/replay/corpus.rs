//! Bundled derivations, in dependency order.

use super::Derivation;
use crate::error::Result;

const FILES: &[(&str, &str)] = &[
    ("trivial", include_str!("../../corpus/trivial.json")),
    ("a3_case1", include_str!("../../corpus/a3_case1.json")),
    ("a3_case2", include_str!("../../corpus/a3_case2.json")),
    ("a3_case3", include_str!("../../corpus/a3_case3.json")),
    ("an_serre_e0_f_n2", include_str!("../../corpus/an_serre_e0_f_n2.json")),
    ("an_serre_e0_f_n3", include_str!("../../corpus/an_serre_e0_f_n3.json")),
    ("an_e0_x2_n2", include_str!("../../corpus/an_e0_x2_n2.json")),
    ("an_e0_x2_n3", include_str!("../../corpus/an_e0_x2_n3.json")),
    ("an_e1e0e0_n2", include_str!("../../corpus/an_e1e0e0_n2.json")),
    ("an_e1e0e0_n3", include_str!("../../corpus/an_e1e0e0_n3.json")),
    ("an_e0f0_n2", include_str!("../../corpus/an_e0f0_n2.json")),
    ("an_e0f0_n3", include_str!("../../corpus/an_e0f0_n3.json")),
    ("c2_e0f0", include_str!("../../corpus/c2_e0f0.json")),
];

pub fn corpus_names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_corpus() -> Result<Vec<Derivation>> {
    FILES.iter().map(|(_, src)| Derivation::from_json(src)).collect()
}
