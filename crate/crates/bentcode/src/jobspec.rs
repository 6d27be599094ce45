//! Parsing and validation of function specifications.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use bentcode_core::bent::{BentError, PAryFunction};
use bentcode_core::gf::{Elem, FieldCtx, FieldError, DEFAULT_MAX_Q};
use serde_json::{json, Value};
use thiserror::Error;

/// Environment variable overriding the field size cap.
pub const MAX_Q_ENV: &str = "BENTCODE_MAX_Q";

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("bad coefficient {0:?}: expected `0`, `gK` or a residue below p")]
    BadCoefficient(String),
    #[error("bad term {0:?}: expected `i:c` or `c`")]
    BadTerm(String),
    #[error("residue {a} is not below p = {p}")]
    ResidueTooLarge { a: u32, p: u32 },
    #[error("family {family} needs {what}")]
    Missing { family: &'static str, what: &'static str },
    #[error("family {family} takes {what}")]
    Unexpected { family: &'static str, what: &'static str },
    #[error("bad value for {name}: {value:?}")]
    BadEnv { name: &'static str, value: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Bent(#[from] BentError),
}

/// A field constant named in a model-stable way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coeff {
    Zero,
    /// `g^k` for the context generator
    GenPow(u64),
    /// an element of the prime field
    Residue(u32),
}

impl Coeff {
    pub fn resolve(self, ctx: &FieldCtx) -> Result<Elem, SpecError> {
        match self {
            Coeff::Zero => Ok(Elem::ZERO),
            Coeff::GenPow(k) => Ok(ctx.gen_pow(k)),
            Coeff::Residue(a) if a < ctx.p() => Ok(ctx.from_prime(a)),
            Coeff::Residue(a) => Err(SpecError::ResidueTooLarge { a, p: ctx.p() }),
        }
    }
}

impl FromStr for Coeff {
    type Err = SpecError;
    fn from_str(s: &str) -> Result<Coeff, SpecError> {
        let bad = || SpecError::BadCoefficient(s.to_string());
        if s == "0" {
            Ok(Coeff::Zero)
        } else if let Some(k) = s.strip_prefix('g') {
            k.parse().map(Coeff::GenPow).map_err(|_| bad())
        } else {
            s.parse().map(Coeff::Residue).map_err(|_| bad())
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Zero => f.write_str("0"),
            Coeff::GenPow(k) => write!(f, "g{k}"),
            Coeff::Residue(a) => write!(f, "{a}"),
        }
    }
}

/// `i:c`, or a bare `c` when the family has a single coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub index: Option<u32>,
    pub coeff: Coeff,
}

impl FromStr for Term {
    type Err = SpecError;
    fn from_str(s: &str) -> Result<Term, SpecError> {
        match s.split_once(':') {
            Some((i, c)) => Ok(Term {
                index: Some(i.trim().parse().map_err(|_| SpecError::BadTerm(s.to_string()))?),
                coeff: c.trim().parse()?,
            }),
            None => Ok(Term {
                index: None,
                coeff: s.trim().parse()?,
            }),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{i}:{}", self.coeff),
            None => write!(f, "{}", self.coeff),
        }
    }
}

/// Parses a comma-separated term list; the empty string gives no terms.
pub fn parse_terms(s: &str) -> Result<Vec<Term>, SpecError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyTag {
    Zero,
    /// `sum Tr(c_i x^(p^i + 1))`
    Quad,
    /// `Tr(c x^d)`
    Mono,
    Dillon,
    HkTernary,
    HkBinomial,
    Cm,
}

impl FamilyTag {
    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Zero => "zero",
            FamilyTag::Quad => "quad",
            FamilyTag::Mono => "mono",
            FamilyTag::Dillon => "dillon",
            FamilyTag::HkTernary => "hk-ternary",
            FamilyTag::HkBinomial => "hk-binomial",
            FamilyTag::Cm => "cm",
        }
    }
}

/// Everything needed to rebuild a function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSpec {
    pub p: u32,
    pub m: u32,
    pub family: FamilyTag,
    pub terms: Vec<Term>,
    /// `d` for `mono`
    pub exponent: Option<u64>,
    /// `e` for `dillon`
    pub e: Option<u64>,
    /// `δ` for `dillon`
    pub delta: Option<Coeff>,
    /// `i` for `cm`
    pub i: Option<u32>,
}

impl FunctionSpec {
    pub fn new(p: u32, m: u32, family: FamilyTag) -> FunctionSpec {
        FunctionSpec {
            p,
            m,
            family,
            terms: Vec::new(),
            exponent: None,
            e: None,
            delta: None,
            i: None,
        }
    }

    pub fn with_terms(mut self, terms: Vec<Term>) -> FunctionSpec {
        self.terms = terms;
        self
    }

    fn single_coeff(&self, family: &'static str) -> Result<Coeff, SpecError> {
        match self.terms.as_slice() {
            [] => Ok(Coeff::Residue(1)),
            [Term { index: None | Some(0), coeff }] => Ok(*coeff),
            _ => Err(SpecError::Unexpected {
                family,
                what: "exactly one coefficient",
            }),
        }
    }

    fn indexed_terms(&self, ctx: &FieldCtx, family: &'static str) -> Result<Vec<(u32, Elem)>, SpecError> {
        self.terms
            .iter()
            .map(|t| {
                let i = t.index.ok_or(SpecError::Missing {
                    family,
                    what: "terms of the form i:c",
                })?;
                Ok((i, t.coeff.resolve(ctx)?))
            })
            .collect()
    }

    fn no_terms(&self, family: &'static str) -> Result<(), SpecError> {
        if self.terms.is_empty() {
            Ok(())
        } else {
            Err(SpecError::Unexpected {
                family,
                what: "no coefficients",
            })
        }
    }

    pub fn build_field(&self) -> Result<Arc<FieldCtx>, SpecError> {
        Ok(Arc::new(FieldCtx::with_cap(self.p, self.m, max_q_from_env()?)?))
    }

    pub fn build(&self, ctx: Arc<FieldCtx>) -> Result<PAryFunction, SpecError> {
        let name = self.family.name();
        Ok(match self.family {
            FamilyTag::Zero => {
                self.no_terms(name)?;
                PAryFunction::zero(ctx)
            }
            FamilyTag::Quad => {
                let terms = self.indexed_terms(&ctx, name)?;
                PAryFunction::quadratic(ctx, &terms)?
            }
            FamilyTag::Mono => {
                let d = self.exponent.ok_or(SpecError::Missing {
                    family: name,
                    what: "--exp",
                })?;
                let c = self.single_coeff(name)?.resolve(&ctx)?;
                PAryFunction::monomial(ctx, c, d)
            }
            FamilyTag::Dillon => {
                let terms = self.indexed_terms(&ctx, name)?;
                let k = self.m / 2;
                let e = self.e.unwrap_or((self.p as u64).pow(k) + 1);
                let delta = self.delta.unwrap_or(Coeff::Zero).resolve(&ctx)?;
                PAryFunction::dillon(ctx, &terms, e, delta)?
            }
            FamilyTag::HkTernary => {
                self.no_terms(name)?;
                PAryFunction::hk_ternary_monomial(ctx)?
            }
            FamilyTag::HkBinomial => {
                self.no_terms(name)?;
                PAryFunction::hk_binomial(ctx)?
            }
            FamilyTag::Cm => {
                let i = self.i.ok_or(SpecError::Missing {
                    family: name,
                    what: "--i",
                })?;
                let c = self.single_coeff(name)?.resolve(&ctx)?;
                PAryFunction::coulter_matthews(ctx, c, i)?
            }
        })
    }

    /// Family parameters as they were given, for report echoes.
    pub fn params_json(&self) -> Value {
        let mut v = json!({
            "coeffs": self.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        });
        let obj = v.as_object_mut().expect("object literal");
        if let Some(d) = self.exponent {
            obj.insert("exp".into(), json!(d));
        }
        if let Some(e) = self.e {
            obj.insert("e".into(), json!(e));
        }
        if let Some(delta) = self.delta {
            obj.insert("delta".into(), json!(delta.to_string()));
        }
        if let Some(i) = self.i {
            obj.insert("i".into(), json!(i));
        }
        v
    }
}

/// The q cap, from `BENTCODE_MAX_Q` if set.
pub fn max_q_from_env() -> Result<u64, SpecError> {
    parse_max_q(std::env::var(MAX_Q_ENV).ok().as_deref())
}

pub fn parse_max_q(value: Option<&str>) -> Result<u64, SpecError> {
    match value {
        Some(v) => v.trim().parse().map_err(|_| SpecError::BadEnv {
            name: MAX_Q_ENV,
            value: v.to_string(),
        }),
        None => Ok(DEFAULT_MAX_Q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_syntax() {
        assert_eq!("0".parse::<Coeff>().unwrap(), Coeff::Zero);
        assert_eq!("g7".parse::<Coeff>().unwrap(), Coeff::GenPow(7));
        assert_eq!("2".parse::<Coeff>().unwrap(), Coeff::Residue(2));
        assert!("h3".parse::<Coeff>().is_err());
        assert!("g".parse::<Coeff>().is_err());
    }

    #[test]
    fn term_lists() {
        let t = parse_terms("0:1, 2:g3").unwrap();
        assert_eq!(
            t,
            vec![
                Term { index: Some(0), coeff: Coeff::Residue(1) },
                Term { index: Some(2), coeff: Coeff::GenPow(3) },
            ]
        );
        assert!(parse_terms("").unwrap().is_empty());
        assert!(parse_terms("x:1").is_err());
        assert_eq!(t[1].to_string(), "2:g3");
    }

    #[test]
    fn residues_are_bounded() {
        let spec = FunctionSpec::new(3, 2, FamilyTag::Quad).with_terms(parse_terms("0:5").unwrap());
        let ctx = spec.build_field().unwrap();
        assert!(matches!(spec.build(ctx), Err(SpecError::ResidueTooLarge { a: 5, p: 3 })));
    }

    #[test]
    fn missing_parameters() {
        let spec = FunctionSpec::new(3, 3, FamilyTag::Mono);
        let ctx = spec.build_field().unwrap();
        assert!(matches!(spec.build(ctx), Err(SpecError::Missing { .. })));
        let spec = FunctionSpec::new(3, 2, FamilyTag::HkBinomial).with_terms(parse_terms("1").unwrap());
        let ctx = spec.build_field().unwrap();
        assert!(matches!(spec.build(ctx), Err(SpecError::Unexpected { .. })));
    }

    #[test]
    fn params_echo() {
        let mut spec = FunctionSpec::new(3, 6, FamilyTag::Mono).with_terms(parse_terms("g7").unwrap());
        spec.exponent = Some(210);
        assert_eq!(spec.params_json(), json!({"coeffs": ["g7"], "exp": 210}));
    }

    #[test]
    fn max_q_values() {
        assert_eq!(parse_max_q(None).unwrap(), DEFAULT_MAX_Q);
        assert_eq!(parse_max_q(Some(" 729 ")).unwrap(), 729);
        assert!(parse_max_q(Some("lots")).is_err());
    }
}
