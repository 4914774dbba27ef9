//! Shared inputs for the benchmarks under `benches/`.

use laurent::homogeneous::{apply_word, quadratic, WordOutcome};
use laurent::recurrences::lookup;
use laurent::LaurentPoly;

/// The symbolic Somos-4 term `y_k`.
pub fn somos4_term(k: i64) -> LaurentPoly {
    let table = lookup("somos4").unwrap().compute_symbolic(k as usize + 1).unwrap();
    table.laurent(&laurent::recurrences::Index::Int(k)).unwrap().clone()
}

/// A cluster variable of the formal quadratic pattern after `word`, the
/// heaviest kind of polynomial the homogeneous checks produce.
pub fn quadratic_component(word: &[usize]) -> LaurentPoly {
    let p = quadratic(3).unwrap();
    match apply_word(&p, word, &p.identity_point()).unwrap() {
        WordOutcome::Laurent { point } => point[word[0] - 1].clone(),
        WordOutcome::NotLaurent { .. } => unreachable!("quadratic maps are Laurent"),
    }
}
