//! Polynomial nonnegativity front-ends: translate "is `p` nonnegative"
//! into cone membership questions over linear images of structured cones
//! (SOS, SONC, DSOS, SDSOS, odd-AG), and convert dual certificates back
//! into explicit decompositions.

mod ag;
mod circuits;
mod decomp;
mod frontends;

pub use ag::{build_odd_ag, OddAgCertificate, OddAgProblem};
pub use circuits::{enumerate_circuits, Circuit};
pub use decomp::{
    build_program, certify_nonneg, decomposition_reassemble, grid_minimum, Decomposition, Method,
    NonnegReport,
};
pub use frontends::{
    build_dsos, build_sdsos, build_sonc, build_sos, monomials_up_to, DsosRay, PolyProgram,
    ProgramKind,
};

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::CertifyError;
use crate::cone::ConeError;
use crate::exact::{format_rational, parse_rational, rat_to_f64, ExactError, Rational};
use crate::image::ImageError;
use crate::ipa::IpaError;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("polynomial degree {degree} exceeds 2 x half-degree {half}")]
    DegreeMismatch { degree: u32, half: u32 },
    #[error("support point {0:?} has no covering circuit; this SONC formulation cannot certify")]
    UncoverableTerm(Vec<u32>),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("support too large for exhaustive circuit enumeration ({0} > 20)")]
    SupportTooLarge(usize),
    #[error("malformed decomposition part: {0}")]
    MalformedPart(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Ipa(#[from] IpaError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Sparse multivariate polynomial: exponent vector -> rational coefficient.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl PolySpec {
    pub fn new(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::new(nvars);
        for (exp, coeff) in terms {
            if exp.len() != nvars {
                return Err(PolyError::Parse(format!(
                    "exponent {exp:?} does not have {nvars} entries"
                )));
            }
            p.add_term(exp, coeff);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exp: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `p - alpha` (shifts the constant coefficient).
    pub fn sub_constant(&self, alpha: &Rational) -> Self {
        let mut out = self.clone();
        out.add_term(vec![0; self.nvars], -alpha);
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::new(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Exact product, used by reassembly checks.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exp, c1 * c2);
            }
        }
        out
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                rat_to_f64(c)
                    * e.iter()
                        .zip(x)
                        .map(|(&k, &xi)| xi.powi(k as i32))
                        .product::<f64>()
            })
            .sum()
    }

    /// Parses the sparse text format: terms like `3/4*x1^2*x2`, `-x^4`,
    /// `2.5x2`, joined by `+`/`-`. A bare `x` means `x1`.
    pub fn parse(input: &str) -> Result<Self, PolyError> {
        let input = input.trim();
        if input.is_empty() {
            return Err(PolyError::Parse("empty polynomial".into()));
        }
        // Split into signed terms at top level.
        let mut raw_terms: Vec<(i32, String)> = Vec::new();
        let mut current = String::new();
        let mut sign = 1;
        let mut prev_was_operand = false;
        for ch in input.chars() {
            match ch {
                '+' | '-' if prev_was_operand => {
                    raw_terms.push((sign, current.clone()));
                    current.clear();
                    sign = if ch == '-' { -1 } else { 1 };
                    prev_was_operand = false;
                }
                '-' => {
                    sign = -sign;
                }
                '+' => {}
                c if c.is_whitespace() => {}
                c => {
                    current.push(c);
                    prev_was_operand = true;
                }
            }
        }
        if current.is_empty() {
            return Err(PolyError::Parse(format!("dangling operator in {input:?}")));
        }
        raw_terms.push((sign, current));

        // First pass determines nvars.
        let mut parsed = Vec::new();
        let mut nvars = 1usize;
        for (sign, term) in &raw_terms {
            let (coeff, powers) = parse_term(term)?;
            for (var, _) in &powers {
                nvars = nvars.max(*var);
            }
            parsed.push((*sign, coeff, powers));
        }
        let mut p = Self::new(nvars);
        for (sign, coeff, powers) in parsed {
            let mut exp = vec![0u32; nvars];
            for (var, k) in powers {
                exp[var - 1] += k;
            }
            let c = if sign < 0 { -coeff } else { coeff };
            p.add_term(exp, c);
        }
        Ok(p)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Highest degree first reads more naturally.
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by_key(|(e, _)| std::cmp::Reverse(e.iter().sum::<u32>()));
        for (i, (exp, coeff)) in items.iter().enumerate() {
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_text(exp);
            if mono.is_empty() {
                out.push_str(&format_rational(&mag));
            } else if mag == Rational::from_integer(1.into()) {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", format_rational(&mag), mono));
            }
        }
        out
    }
}

fn monomial_text(exp: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in exp.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let var = format!("x{}", i + 1);
        if k == 1 {
            parts.push(var);
        } else {
            parts.push(format!("{var}^{k}"));
        }
    }
    parts.join("*")
}

/// One factor run: optional coefficient and variable powers.
fn parse_term(term: &str) -> Result<(Rational, Vec<(usize, u32)>), PolyError> {
    let bytes = term.as_bytes();
    let mut i = 0;
    let mut coeff: Option<Rational> = None;
    let mut powers: Vec<(usize, u32)> = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c == '*' {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.' || bytes[i] == b'/')
            {
                i += 1;
            }
            let num = parse_rational(&term[start..i])
                .map_err(|_| PolyError::Parse(format!("bad coefficient in {term:?}")))?;
            coeff = Some(match coeff {
                Some(c) => c * num,
                None => num,
            });
            continue;
        }
        if c == 'x' {
            i += 1;
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let var: usize = if start == i {
                1
            } else {
                term[start..i]
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad variable index in {term:?}")))?
            };
            if var == 0 {
                return Err(PolyError::Parse("variables are numbered from x1".into()));
            }
            let mut exp = 1u32;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                exp = term[start..i]
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad exponent in {term:?}")))?;
            }
            powers.push((var, exp));
            continue;
        }
        return Err(PolyError::Parse(format!(
            "unexpected character {c:?} in {term:?}"
        )));
    }
    Ok((
        coeff.unwrap_or_else(|| Rational::from_integer(1.into())),
        powers,
    ))
}

/// JSON form: `{nvars, terms: [{exp: [...], coeff: "p/q"}]}`.
#[derive(Serialize, Deserialize)]
pub struct PolyFile {
    pub nvars: usize,
    pub terms: Vec<PolyTerm>,
}

#[derive(Serialize, Deserialize)]
pub struct PolyTerm {
    pub exp: Vec<u32>,
    pub coeff: String,
}

impl PolyFile {
    pub fn from_poly(p: &PolySpec) -> Self {
        Self {
            nvars: p.nvars,
            terms: p
                .terms
                .iter()
                .map(|(e, c)| PolyTerm {
                    exp: e.clone(),
                    coeff: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<PolySpec, PolyError> {
        PolySpec::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|t| {
                    parse_rational(&t.coeff)
                        .map(|c| (t.exp.clone(), c))
                        .map_err(PolyError::Exact)
                })
                .collect::<Result<Vec<_>, _>>()?,
        )
    }
}

/// The Motzkin polynomial `x^4 y^2 + x^2 y^4 - 3 x^2 y^2 + 1`: nonnegative
/// (AM-GM) but not a sum of squares. Used across tests and examples.
pub fn motzkin() -> PolySpec {
    PolySpec::from_terms(
        2,
        vec![
            (vec![4, 2], Rational::from_integer(1.into())),
            (vec![2, 4], Rational::from_integer(1.into())),
            (vec![2, 2], Rational::from_integer((-3).into())),
            (vec![0, 0], Rational::from_integer(1.into())),
        ],
    )
    .unwrap()
}
