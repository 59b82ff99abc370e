//! Relation files: `{"n": n, "basis": [[[re, im], …], …]}` with one entry of
//! `basis` per graph basis column of length `2n` (argument block first).
//! Numbers are written in shortest round-trip form, so writing then reading
//! reproduces every entry bit for bit.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::LinearRelation;
use crate::scalar::{CMat, Real};
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub n: usize,
    pub basis: Vec<Vec<[f64; 2]>>,
}

impl RelationFile {
    pub fn from_relation<R: Real>(t: &LinearRelation<R>) -> Self {
        let g = t.graph().basis();
        let basis = g
            .column_iter()
            .map(|c| c.iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect())
            .collect();
        Self {
            n: t.space_dim(),
            basis,
        }
    }

    /// Rebuilds the relation without re-orthonormalizing the stored basis.
    pub fn to_relation<R: Real>(&self, tol: &Tolerance<R>) -> Result<LinearRelation<R>> {
        let rows = 2 * self.n;
        if self.basis.len() > rows {
            return Err(Error::InvalidInput(format!(
                "{} basis columns exceed the dimension {rows} of X × X",
                self.basis.len()
            )));
        }
        if let Some((j, c)) = self.basis.iter().enumerate().find(|(_, c)| c.len() != rows) {
            return Err(Error::InvalidInput(format!(
                "basis column {j} has length {}, expected {rows}",
                c.len()
            )));
        }
        let m = CMat::<R>::from_fn(rows, self.basis.len(), |i, j| {
            let [re, im] = self.basis[j][i];
            Complex::new(R::lit(re), R::lit(im))
        });
        LinearRelation::from_graph(Subspace::from_orthonormal_checked(m, tol)?)
    }
}

pub fn relation_to_json<R: Real>(t: &LinearRelation<R>) -> String {
    serde_json::to_string_pretty(&RelationFile::from_relation(t)).expect("finite entries serialize")
}

pub fn relation_from_json<R: Real>(text: &str, tol: &Tolerance<R>) -> Result<LinearRelation<R>> {
    let file: RelationFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("relation JSON: {e}")))?;
    file.to_relation(tol)
}
