//! JSON documents describing systems.
//!
//! ```json
//! {
//!   "n": 2,
//!   "mode": "exact",
//!   "a": [[["0","0"], ["1","0"]], [["1","0"], ["-1","0"]]],
//!   "m": [[0, 2], [2, 1]],
//!   "Q": [[{"coeff": ["1","0"], "exp": [1, 2]}],
//!         [{"coeff": ["1","0"], "exp": [2, 1]}]],
//!   "t": "1"
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs of strings: rationals `"p/q"` in exact
//! mode, decimals in float mode. A bare string is read as a real number.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::SparsePoly;
use crate::scalar::{Exact, Float, Mode, Scalar};
use crate::system::{TransformedSystem, TsikhSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarDoc {
    Complex([String; 2]),
    Real(String),
}

impl ScalarDoc {
    pub fn parse<F: Scalar>(&self) -> Result<F> {
        match self {
            ScalarDoc::Complex([re, im]) => F::parse_parts(re, im),
            ScalarDoc::Real(re) => F::parse_parts(re, "0"),
        }
    }

    pub fn render<F: Scalar>(x: &F) -> Self {
        ScalarDoc::Complex(x.render_parts())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: ScalarDoc,
    pub exp: Vec<u32>,
}

fn render_poly<F: Scalar>(p: &SparsePoly<F>) -> Vec<TermDoc> {
    p.terms()
        .map(|(e, c)| TermDoc {
            coeff: ScalarDoc::render(c),
            exp: e.as_slice().to_vec(),
        })
        .collect()
}

fn parse_poly<F: Scalar>(n: usize, terms: &[TermDoc]) -> Result<SparsePoly<F>> {
    let parsed = terms
        .iter()
        .map(|t| {
            if t.exp.len() != n {
                return Err(Error::Parse(format!(
                    "exponent {:?} has {} entries, expected {n}",
                    t.exp,
                    t.exp.len()
                )));
            }
            Ok((MultiIndex::from_slice(&t.exp), t.coeff.parse::<F>()?))
        })
        .collect::<Result<Vec<_>>>()?;
    SparsePoly::from_terms(n, parsed)
}

fn default_t() -> ScalarDoc {
    ScalarDoc::Real("1".into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub n: usize,
    pub mode: Mode,
    pub a: Vec<Vec<ScalarDoc>>,
    pub m: Vec<Vec<u32>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<TermDoc>>,
    #[serde(default = "default_t")]
    pub t: ScalarDoc,
}

/// A parsed system in whichever mode its document requested.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySystem {
    Exact(TsikhSystem<Exact>),
    Float(TsikhSystem<Float>),
}

impl AnySystem {
    pub fn mode(&self) -> Mode {
        match self {
            AnySystem::Exact(_) => Mode::Exact,
            AnySystem::Float(_) => Mode::Float,
        }
    }
}

impl SystemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_system<F: Scalar>(sys: &TsikhSystem<F>) -> Self {
        SystemDocument {
            n: sys.n(),
            mode: F::MODE,
            a: sys
                .a()
                .iter()
                .map(|row| row.iter().map(ScalarDoc::render).collect())
                .collect(),
            m: sys.m().to_vec(),
            q: sys.perturbations().iter().map(render_poly).collect(),
            t: ScalarDoc::render(sys.t()),
        }
    }

    /// Parses the entries in the mode given by `F`, regardless of `self.mode`.
    pub fn build<F: Scalar>(&self) -> Result<TsikhSystem<F>> {
        let n = self.n;
        if self.a.len() != n || self.a.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("\"a\" must be a {n}x{n} matrix")));
        }
        if self.m.len() != n || self.m.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("\"m\" must be a {n}x{n} matrix")));
        }
        if self.q.len() != n {
            return Err(Error::Parse(format!("\"Q\" must list {n} polynomials")));
        }
        let a = self
            .a
            .iter()
            .map(|row| row.iter().map(|x| x.parse::<F>()).collect())
            .collect::<Result<Vec<Vec<F>>>>()?;
        let q = self
            .q
            .iter()
            .map(|p| parse_poly::<F>(n, p))
            .collect::<Result<Vec<_>>>()?;
        TsikhSystem::new(a, self.m.clone(), q, self.t.parse::<F>()?)
    }

    pub fn to_system(&self) -> Result<AnySystem> {
        Ok(match self.mode {
            Mode::Exact => AnySystem::Exact(self.build()?),
            Mode::Float => AnySystem::Float(self.build()?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformedDocument {
    pub n: usize,
    pub mode: Mode,
    pub a: Vec<Vec<ScalarDoc>>,
    pub mhat: Vec<Vec<u32>>,
    pub qtilde: Vec<Vec<TermDoc>>,
    #[serde(rename = "Qtilde")]
    pub qtilde_pert: Vec<Vec<TermDoc>>,
    pub t: ScalarDoc,
    pub permanent: u64,
}

impl TransformedDocument {
    pub fn from_transformed<F: Scalar>(ts: &TransformedSystem<F>) -> Self {
        TransformedDocument {
            n: ts.n(),
            mode: F::MODE,
            a: ts
                .a()
                .iter()
                .map(|row| row.iter().map(ScalarDoc::render).collect())
                .collect(),
            mhat: ts.mhat().to_vec(),
            qtilde: ts.qtilde().iter().map(render_poly).collect(),
            qtilde_pert: ts.qtilde_pert().iter().map(render_poly).collect(),
            t: ScalarDoc::render(ts.t()),
            permanent: ts.permanent(),
        }
    }
}
