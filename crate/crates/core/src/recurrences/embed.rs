//! Lattice embeddings of the Gale–Robinson sequences: a one-dimensional
//! term `y_N` is the origin value of a cube (three-term) or octahedron
//! (two-term) array whose initial points all carry indices in `0..n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::lattice::{HalfSpace, LatticeRecurrence, Region};
use super::one_dim::OneDimRecurrence;
use super::{Index, RecurrenceError, TermTable};
use crate::stencil::{Point, StencilRecurrence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Embedding {
    /// `y_m y_{m-n} = α y_{m-p} y_{m-n+p} + β y_{m-q} y_{m-n+q} + γ y_{m-r} y_{m-n+r}`, `n = p+q+r`.
    GaleRobinson { p: i64, q: i64, r: i64 },
    /// `y_m y_{m-n} = α y_{m-p} y_{m-n+p} + β y_{m-q} y_{m-n+q}`.
    TwoTerm { p: i64, q: i64, n: i64 },
}

impl Embedding {
    pub fn validate(self) -> Result<(), RecurrenceError> {
        match self {
            Embedding::GaleRobinson { p, q, r } => {
                if p <= 0 || q <= 0 || r <= 0 {
                    return Err(RecurrenceError::Embedding("p, q, r must be positive".into()));
                }
                if p == q || q == r || p == r {
                    return Err(RecurrenceError::Embedding(format!("p, q, r must be distinct, got ({p},{q},{r})")));
                }
            }
            Embedding::TwoTerm { p, q, n } => {
                if !(0 < p && p < q && 2 * q <= n) {
                    return Err(RecurrenceError::Embedding(format!(
                        "need 0 < p < q <= n/2, got (p,q,n) = ({p},{q},{n})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(self) -> i64 {
        match self {
            Embedding::GaleRobinson { p, q, r } => p + q + r,
            Embedding::TwoTerm { n, .. } => n,
        }
    }

    /// The sequence as a one-dimensional recurrence in `x_1 .. x_{n-1}`.
    pub fn one_dim(self, name: &str, bindings: &[(&str, i64)]) -> Result<OneDimRecurrence, RecurrenceError> {
        self.validate()?;
        let n = self.n();
        let (f, params): (String, &[&str]) = match self {
            Embedding::GaleRobinson { p, q, r } => (
                format!(
                    "alpha*x{}*x{p} + beta*x{}*x{q} + gamma*x{}*x{r}",
                    n - p,
                    n - q,
                    n - r
                ),
                &["alpha", "beta", "gamma"],
            ),
            Embedding::TwoTerm { p, q, .. } => (
                format!("alpha*x{}*x{p} + beta*x{}*x{q}", n - p, n - q),
                &["alpha", "beta"],
            ),
        };
        OneDimRecurrence::new(name, n as usize, &f, params, bindings)
    }
}

/// The lattice instance for one target index `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedInstance {
    pub embedding: Embedding,
    pub big_n: i64,
    pub recurrence: LatticeRecurrence,
    /// `index(h) = (big_n * denom + form . h) / denom`.
    form: Vec<i64>,
    denom: i64,
}

impl EmbeddedInstance {
    /// The one-dimensional index carried by lattice point `h`.
    pub fn index(&self, h: &[i64]) -> i64 {
        let s: i64 = self.form.iter().zip(h).map(|(a, b)| a * b).sum();
        self.big_n + s / self.denom
    }

    /// `y_N` as a Laurent polynomial in `y0 .. y{n-1}` via the lattice.
    pub fn compute_symbolic(&self, one_dim: &OneDimRecurrence) -> Result<TermTable, RecurrenceError> {
        let space = one_dim.initial_space()?;
        let origin: Point = vec![0; 3];
        let mut table = self.recurrence.compute_symbolic_in(&[origin], &space, |h| format!("y{}", self.index(h)))?;
        for e in &mut table.entries {
            if let Index::Point(p) = &e.index {
                e.index = Index::Int(self.index(p));
            }
        }
        Ok(table)
    }

    /// Indices carried by the initial points below the origin.
    pub fn initial_indices(&self) -> Result<Vec<i64>, RecurrenceError> {
        let d = self.recurrence.downset(&[0, 0, 0])?;
        let mut out: Vec<i64> = d.initial.iter().map(|h| self.index(h)).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

fn bindings_map(bindings: &[(&str, i64)]) -> BTreeMap<String, i64> {
    bindings.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// `z_{ijk} = y_{N+pi+qj+rk}` on `H(N) = {N + pi + qj + rk >= 0}`.
pub fn gale_robinson_embed(p: i64, q: i64, r: i64, big_n: i64, bindings: &[(&str, i64)]) -> Result<EmbeddedInstance, RecurrenceError> {
    let embedding = Embedding::GaleRobinson { p, q, r };
    embedding.validate()?;
    let region = Region {
        half_spaces: vec![HalfSpace {
            normal: vec![p, q, r],
            offset: big_n,
        }],
    };
    let recurrence = LatticeRecurrence::new(
        &format!("gale-robinson({p},{q},{r}) N={big_n}"),
        StencilRecurrence::cube(),
        region,
        bindings_map(bindings),
    )?;
    Ok(EmbeddedInstance {
        embedding,
        big_n,
        recurrence,
        form: vec![p, q, r],
        denom: 1,
    })
}

/// `z_{ijk} = y_{N + l(i,j,k)}` with `l = n(i+j+k)/2 - pi - qj` on the
/// even sublattice.
pub fn two_term_embed(p: i64, q: i64, n: i64, big_n: i64, bindings: &[(&str, i64)]) -> Result<EmbeddedInstance, RecurrenceError> {
    let embedding = Embedding::TwoTerm { p, q, n };
    embedding.validate()?;
    let form = vec![n - 2 * p, n - 2 * q, n];
    let region = Region {
        half_spaces: vec![HalfSpace {
            normal: form.clone(),
            offset: 2 * big_n,
        }],
    };
    let recurrence = LatticeRecurrence::new(
        &format!("two-term({p},{q},{n}) N={big_n}"),
        StencilRecurrence::octahedron(),
        region,
        bindings_map(bindings),
    )?;
    Ok(EmbeddedInstance {
        embedding,
        big_n,
        recurrence,
        form,
        denom: 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_map() {
        let e = gale_robinson_embed(1, 2, 3, 6, &[]).unwrap();
        assert_eq!(e.index(&[0, 0, 0]), 6);
        assert_eq!(e.index(&[-1, 0, 0]), 5);
        let t = two_term_embed(1, 2, 5, 8, &[]).unwrap();
        assert_eq!(t.index(&[0, 0, 0]), 8);
        assert_eq!(t.index(&[0, 0, -2]), 3);
    }

    #[test]
    fn initial_image_is_in_range() {
        let e = gale_robinson_embed(1, 2, 4, 7, &[]).unwrap();
        let idx = e.initial_indices().unwrap();
        assert!(idx.iter().all(|&m| (0..7).contains(&m)), "{idx:?}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gale_robinson_embed(1, 1, 3, 6, &[]).is_err());
        assert!(two_term_embed(2, 1, 5, 6, &[]).is_err());
        assert!(two_term_embed(1, 3, 5, 6, &[]).is_err());
    }
}
