//! p-ary functions on `F_{p^m}`: the bent families, exact Walsh spectra,
//! weak-regularity analysis and the RF scaling test.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cyclotomic::{sqrt_pstar_pow, CycError, CycInt};
use crate::gf::{gcd, minus_one_symbol, pow_mod, Elem, FieldCtx, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BentError {
    #[error("exponent index {i} out of range (max {max})")]
    BadExponentIndex { i: u32, max: u32 },
    #[error("family needs characteristic {expected}, got {found}")]
    WrongCharacteristic { expected: u32, found: u32 },
    #[error("bad exponent parameter {0}")]
    BadExponent(u32),
    #[error("extension degree {0} must be even")]
    OddDegree(u32),
    #[error("{e} does not divide p^k + 1")]
    BadDivisor { e: u64 },
    #[error("extension degree {m} is not allowed here: {why}")]
    BadDegree { m: u32, why: &'static str },
    #[error("coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("coefficient lies outside F_{{p^{ell}}}")]
    NotInSubfield { ell: u32 },
    #[error("function is not weakly regular bent")]
    NotWeaklyRegular,
    #[error("value table has length {found}, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// Where a function came from. Coefficients are elements of the owning field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `sum Tr(c_i x^(p^i + 1))`.
    Quadratic { terms: Vec<(u32, Elem)> },
    /// `Tr(c x^d)`.
    Monomial { coeff: Elem, exponent: u64 },
    /// `sum Tr(c_i x^(i(p^k - 1))) + Tr_1^ell(δ x^((p^m - 1)/e))`, `m = 2k`.
    Dillon {
        k: u32,
        terms: Vec<(u32, Elem)>,
        e: u64,
        ell: u32,
        delta: Elem,
    },
    /// `Tr(c x^((3^m - 1)/4 + 3^k + 1))`, `p = 3`, `m = 2k`, `k` odd.
    HkTernaryMonomial { k: u32, c: Elem },
    /// `Tr(x^(p^3k + p^2k - p^k + 1) + x^2)`, `m = 4k`.
    HkBinomial { k: u32 },
    /// `Tr(c x^((3^i + 1)/2))`, `p = 3`, `i` odd, `gcd(i, m) = 1`.
    CoulterMatthews { c: Elem, i: u32 },
    Custom,
}

/// A total function `F_{p^m} -> F_p` stored as its value table.
#[derive(Debug, Clone)]
pub struct PAryFunction {
    ctx: Arc<FieldCtx>,
    values: Vec<u32>,
    family: Family,
}

fn add_monomial(ctx: &FieldCtx, values: &mut [u32], c: Elem, d: u64) {
    let p = ctx.p();
    for x in ctx.nonzero() {
        let t = ctx.tr(ctx.mul(c, ctx.pow(x, d)));
        let v = &mut values[x.index() as usize];
        *v = (*v + t) % p;
    }
}

impl PAryFunction {
    /// Wraps an arbitrary value table (entries reduced mod `p`).
    pub fn from_values(ctx: Arc<FieldCtx>, values: Vec<u32>) -> Result<PAryFunction, BentError> {
        let q = ctx.q() as usize;
        if values.len() != q {
            return Err(BentError::TableLength {
                expected: q,
                found: values.len(),
            });
        }
        let p = ctx.p();
        let values = values.into_iter().map(|v| v % p).collect();
        Ok(PAryFunction {
            ctx,
            values,
            family: Family::Custom,
        })
    }

    pub fn zero(ctx: Arc<FieldCtx>) -> PAryFunction {
        let values = vec![0; ctx.q() as usize];
        PAryFunction {
            ctx,
            values,
            family: Family::Custom,
        }
    }

    pub fn quadratic(ctx: Arc<FieldCtx>, terms: &[(u32, Elem)]) -> Result<PAryFunction, BentError> {
        let max = ctx.m() / 2;
        let mut values = vec![0; ctx.q() as usize];
        for &(i, c) in terms {
            if i > max {
                return Err(BentError::BadExponentIndex { i, max });
            }
            let d = (ctx.p() as u64).pow(i) + 1;
            add_monomial(&ctx, &mut values, c, d);
        }
        Ok(PAryFunction {
            ctx,
            values,
            family: Family::Quadratic {
                terms: terms.to_vec(),
            },
        })
    }

    pub fn monomial(ctx: Arc<FieldCtx>, coeff: Elem, exponent: u64) -> PAryFunction {
        let mut values = vec![0; ctx.q() as usize];
        add_monomial(&ctx, &mut values, coeff, exponent);
        PAryFunction {
            ctx,
            values,
            family: Family::Monomial { coeff, exponent },
        }
    }

    pub fn coulter_matthews(ctx: Arc<FieldCtx>, c: Elem, i: u32) -> Result<PAryFunction, BentError> {
        if ctx.p() != 3 {
            return Err(BentError::WrongCharacteristic {
                expected: 3,
                found: ctx.p(),
            });
        }
        if i % 2 == 0 || gcd(i as u64, ctx.m() as u64) != 1 {
            return Err(BentError::BadExponent(i));
        }
        if c.is_zero() {
            return Err(BentError::ZeroCoefficient);
        }
        let d = (3u64.pow(i) + 1) / 2;
        let mut values = vec![0; ctx.q() as usize];
        add_monomial(&ctx, &mut values, c, d);
        Ok(PAryFunction {
            ctx,
            values,
            family: Family::CoulterMatthews { c, i },
        })
    }

    /// Dillon-type function. `terms` holds `(i, c_i)` with `1 <= i <= p^k - 1`.
    /// Every monomial is taken to vanish at `x = 0`.
    pub fn dillon(
        ctx: Arc<FieldCtx>,
        terms: &[(u32, Elem)],
        e: u64,
        delta: Elem,
    ) -> Result<PAryFunction, BentError> {
        let (p, m) = (ctx.p() as u64, ctx.m());
        if m % 2 != 0 {
            return Err(BentError::OddDegree(m));
        }
        let k = m / 2;
        let pk = p.pow(k);
        if e == 0 || (pk + 1) % e != 0 {
            return Err(BentError::BadDivisor { e });
        }
        let ell = (1..=m)
            .find(|&l| m % l == 0 && (p.pow(l) - 1) % e == 0)
            .expect("e divides p^m - 1");
        if !ctx.in_subfield(delta, ell) {
            return Err(BentError::NotInSubfield { ell });
        }
        let max = (pk - 1) as u32;
        let mut values = vec![0; ctx.q() as usize];
        for &(i, c) in terms {
            if i == 0 || i > max {
                return Err(BentError::BadExponentIndex { i, max });
            }
            add_monomial(&ctx, &mut values, c, i as u64 * (pk - 1));
        }
        let d = (ctx.q() as u64 - 1) / e;
        for x in ctx.nonzero() {
            let y = ctx.mul(delta, ctx.pow(x, d));
            let t = ctx.subfield_trace(y, ell).expect("δ x^d lies in the subfield");
            let v = &mut values[x.index() as usize];
            *v = (*v + t) % ctx.p();
        }
        Ok(PAryFunction {
            ctx,
            values,
            family: Family::Dillon {
                k,
                terms: terms.to_vec(),
                e,
                ell,
                delta,
            },
        })
    }

    /// Ternary monomial with `c = α^((3^k + 1)/4)` for the context generator `α`.
    pub fn hk_ternary_monomial(ctx: Arc<FieldCtx>) -> Result<PAryFunction, BentError> {
        let alpha = ctx.generator();
        PAryFunction::hk_ternary_monomial_with(ctx, alpha)
    }

    /// Ternary monomial built from a chosen primitive element `alpha`.
    pub fn hk_ternary_monomial_with(ctx: Arc<FieldCtx>, alpha: Elem) -> Result<PAryFunction, BentError> {
        if ctx.p() != 3 {
            return Err(BentError::WrongCharacteristic {
                expected: 3,
                found: ctx.p(),
            });
        }
        let m = ctx.m();
        if m % 2 != 0 || (m / 2) % 2 == 0 {
            return Err(BentError::BadDegree {
                m,
                why: "need m = 2k with k odd",
            });
        }
        let k = m / 2;
        let c = ctx.pow(alpha, (3u64.pow(k) + 1) / 4);
        let d = (ctx.q() as u64 - 1) / 4 + 3u64.pow(k) + 1;
        let mut values = vec![0; ctx.q() as usize];
        add_monomial(&ctx, &mut values, c, d);
        Ok(PAryFunction {
            ctx,
            values,
            family: Family::HkTernaryMonomial { k, c },
        })
    }

    pub fn hk_binomial(ctx: Arc<FieldCtx>) -> Result<PAryFunction, BentError> {
        let m = ctx.m();
        if m % 4 != 0 {
            return Err(BentError::BadDegree {
                m,
                why: "need m divisible by 4",
            });
        }
        let k = m / 4;
        let p = ctx.p() as u64;
        let d = p.pow(3 * k) + p.pow(2 * k) - p.pow(k) + 1;
        let mut values = vec![0; ctx.q() as usize];
        add_monomial(&ctx, &mut values, Elem::ONE, d);
        add_monomial(&ctx, &mut values, Elem::ONE, 2);
        Ok(PAryFunction {
            ctx,
            values,
            family: Family::HkBinomial { k },
        })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    #[inline]
    pub fn eval(&self, x: Elem) -> u32 {
        self.values[x.index() as usize]
    }

    /// Histogram of `f(x) + Tr(βx)` over `F_p`.
    pub fn walsh_histogram(&self, beta: Elem) -> Vec<i64> {
        let p = self.ctx.p() as usize;
        let n = self.ctx.q() as usize - 1;
        let mut wide = vec![0i64; 2 * p - 1];
        wide[self.values[0] as usize] += 1;
        let f = &self.values[1..];
        match beta.log() {
            None => {
                for &v in f {
                    wide[v as usize] += 1;
                }
            }
            Some(b) => {
                let tr = &self.ctx.trace_by_log()[b as usize..b as usize + n];
                for (&v, &t) in f.iter().zip(tr) {
                    wide[(v + t) as usize] += 1;
                }
            }
        }
        let mut hist = wide[..p].to_vec();
        for (j, &c) in wide[p..].iter().enumerate() {
            hist[j] += c;
        }
        hist
    }

    /// `W_f(β) = sum_x ζ^(f(x) + Tr(βx))`.
    pub fn walsh_value(&self, beta: Elem) -> CycInt {
        CycInt::from_exponent_counts(self.ctx.p(), &self.walsh_histogram(beta))
    }

    /// The full spectrum, indexed by element index.
    pub fn walsh_transform(&self) -> Vec<CycInt> {
        self.ctx.elements().map(|b| self.walsh_value(b)).collect()
    }

    pub fn analyze(&self) -> Result<WalshProfile, BentError> {
        WalshProfile::from_walsh(self.ctx.p(), self.ctx.m(), self.walsh_transform())
    }

    /// Tests `f(0) = 0` and `f(ax) = a^h f(x)` for the even `h` in
    /// `[2, 2(p-1)]` with `gcd(h - 1, p - 1) = 1`.
    pub fn rf_check(&self) -> RfCertificate {
        let ctx = &*self.ctx;
        let p = ctx.p();
        if self.values[0] != 0 {
            return RfCertificate::NotMember(RfFailure::NonzeroAtZero {
                value: self.values[0],
            });
        }
        let mut witnesses = Vec::new();
        for h in (2..=2 * (p - 1)).step_by(2) {
            if gcd(h as u64 - 1, p as u64 - 1) != 1 {
                continue;
            }
            match self.scaling_witness(h) {
                None => return RfCertificate::Member { h },
                Some((a, x)) => witnesses.push(ScalingWitness { h, a, x }),
            }
        }
        RfCertificate::NotMember(RfFailure::Scaling { witnesses })
    }

    fn scaling_witness(&self, h: u32) -> Option<(u32, Elem)> {
        let ctx = &*self.ctx;
        let p = ctx.p();
        for a in 2..p {
            let ah = pow_mod(a as u64, h as u64, p as u64) as u32;
            let ae = ctx.from_prime(a);
            for x in ctx.nonzero() {
                if self.eval(ctx.mul(ae, x)) != ah * self.eval(x) % p {
                    return Some((a, x));
                }
            }
        }
        None
    }
}

/// `ε` of a weakly regular function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(s: i64) -> Sign {
        if s >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl core::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i64(self.value() * rhs.value())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingWitness {
    pub h: u32,
    pub a: u32,
    pub x: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RfFailure {
    NonzeroAtZero { value: u32 },
    /// One counterexample per candidate `h`.
    Scaling { witnesses: Vec<ScalingWitness> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RfCertificate {
    Member { h: u32 },
    NotMember(RfFailure),
}

impl RfCertificate {
    pub fn is_member(&self) -> bool {
        matches!(self, RfCertificate::Member { .. })
    }

    pub fn h(&self) -> Option<u32> {
        match self {
            RfCertificate::Member { h } => Some(*h),
            RfCertificate::NotMember(_) => None,
        }
    }
}

/// Walsh spectrum plus what can be read off it.
#[derive(Debug, Clone)]
pub struct WalshProfile {
    p: u32,
    m: u32,
    walsh: Vec<CycInt>,
    is_bent: bool,
    /// Per-β `(sign, exponent)` with `W(β) = sign · G^m · ζ^exponent`.
    decomposition: Option<Vec<(Sign, u32)>>,
    sign: Option<Sign>,
}

impl WalshProfile {
    pub fn from_walsh(p: u32, m: u32, walsh: Vec<CycInt>) -> Result<WalshProfile, BentError> {
        let pm = (p as i64).pow(m);
        let target = CycInt::from_integer(p, pm);
        let mut is_bent = true;
        for w in &walsh {
            if w.abs_square()? != target {
                is_bent = false;
                break;
            }
        }
        let mut decomposition = None;
        let mut sign = None;
        if is_bent {
            let gm = sqrt_pstar_pow(p, m)?;
            let mut candidates = Vec::with_capacity(2 * p as usize);
            for c in 0..p {
                let z = gm.mul_root_power(c as i64)?;
                candidates.push((Sign::Minus, c, -&z));
                candidates.push((Sign::Plus, c, z));
            }
            let dec = walsh
                .iter()
                .map(|w| {
                    candidates
                        .iter()
                        .find(|(_, _, z)| z == w)
                        .map(|&(s, c, _)| (s, c))
                })
                .collect::<Option<Vec<_>>>();
            if let Some(dec) = dec {
                let s0 = dec[0].0;
                if dec.iter().all(|&(s, _)| s == s0) {
                    sign = Some(s0);
                }
                decomposition = Some(dec);
            }
        }
        Ok(WalshProfile {
            p,
            m,
            walsh,
            is_bent,
            decomposition,
            sign,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn walsh(&self) -> &[CycInt] {
        &self.walsh
    }

    pub fn is_bent(&self) -> bool {
        self.is_bent
    }

    pub fn is_weakly_regular(&self) -> bool {
        self.sign.is_some()
    }

    pub fn sign(&self) -> Option<Sign> {
        self.sign
    }

    /// Regular means `W(β) = p^(m/2) ζ^(f*(β))` for all β.
    pub fn is_regular(&self) -> bool {
        match (self.sign, self.m % 2) {
            (Some(s), 0) => {
                let lambda = minus_one_symbol(self.p) as i64;
                s.value() * lambda.pow(self.m / 2) == 1
            }
            _ => false,
        }
    }

    /// The dual `f*` as a value table, when weakly regular.
    pub fn dual(&self) -> Option<Vec<u32>> {
        self.sign?;
        self.decomposition
            .as_ref()
            .map(|d| d.iter().map(|&(_, c)| c).collect())
    }
}

/// `f*` as a function on the same field.
pub fn dual_function(f: &PAryFunction, profile: &WalshProfile) -> Result<PAryFunction, BentError> {
    let dual = profile.dual().ok_or(BentError::NotWeaklyRegular)?;
    PAryFunction::from_values(f.ctx.clone(), dual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32, m: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, m).unwrap())
    }

    #[test]
    fn zero_function_spectrum() {
        let ctx = field(3, 2);
        let f = PAryFunction::zero(ctx.clone());
        let w = f.walsh_transform();
        assert_eq!(w[0].as_rational_integer(), Ok(9));
        assert!(w[1..].iter().all(|z| z.is_zero()));
        assert!(!f.analyze().unwrap().is_bent());
    }

    #[test]
    fn quadratic_walsh_at_zero() {
        let f = PAryFunction::quadratic(field(3, 2), &[(0, Elem::ONE)]).unwrap();
        assert_eq!(f.walsh_value(Elem::ZERO).as_rational_integer(), Ok(3));
        let f = PAryFunction::quadratic(field(3, 4), &[(0, Elem::ONE)]).unwrap();
        assert_eq!(f.walsh_value(Elem::ZERO).as_rational_integer(), Ok(-9));
    }

    #[test]
    fn quadratic_signs() {
        let ctx = field(3, 4);
        let f = PAryFunction::quadratic(ctx.clone(), &[(0, Elem::ONE)]).unwrap();
        assert_eq!(f.analyze().unwrap().sign(), Some(Sign::Minus));
        let f = PAryFunction::quadratic(ctx.clone(), &[(0, ctx.generator())]).unwrap();
        assert_eq!(f.analyze().unwrap().sign(), Some(Sign::Plus));
    }

    #[test]
    fn quadratic_index_bound() {
        let err = PAryFunction::quadratic(field(3, 4), &[(3, Elem::ONE)]).unwrap_err();
        assert_eq!(err, BentError::BadExponentIndex { i: 3, max: 2 });
    }

    #[test]
    fn parseval_and_bentness() {
        let ctx = field(5, 2);
        let f = PAryFunction::quadratic(ctx.clone(), &[(0, ctx.gen_pow(3))]).unwrap();
        let w = f.walsh_transform();
        let total = w
            .iter()
            .fold(CycInt::zero(5), |acc, z| &acc + &z.abs_square().unwrap());
        assert_eq!(total.as_rational_integer(), Ok(625));
        assert!(f.analyze().unwrap().is_bent());
    }

    #[test]
    fn linear_function_is_not_rf() {
        let ctx = field(5, 2);
        let f = PAryFunction::monomial(ctx, Elem::ONE, 1);
        match f.rf_check() {
            RfCertificate::NotMember(RfFailure::Scaling { witnesses }) => {
                assert_eq!(witnesses.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quadratic_is_rf_with_h2() {
        let f = PAryFunction::quadratic(field(7, 2), &[(0, Elem::ONE)]).unwrap();
        assert_eq!(f.rf_check(), RfCertificate::Member { h: 2 });
    }

    #[test]
    fn nonzero_at_zero_is_not_rf() {
        let ctx = field(3, 2);
        let mut v = vec![0; 9];
        v[0] = 1;
        let f = PAryFunction::from_values(ctx, v).unwrap();
        assert_eq!(
            f.rf_check(),
            RfCertificate::NotMember(RfFailure::NonzeroAtZero { value: 1 })
        );
    }

    #[test]
    fn family_preconditions() {
        assert!(matches!(
            PAryFunction::coulter_matthews(field(5, 3), Elem::ONE, 3),
            Err(BentError::WrongCharacteristic { .. })
        ));
        assert_eq!(
            PAryFunction::coulter_matthews(field(3, 3), Elem::ONE, 3).unwrap_err(),
            BentError::BadExponent(3)
        );
        assert!(matches!(
            PAryFunction::hk_ternary_monomial(field(3, 4)),
            Err(BentError::BadDegree { .. })
        ));
        assert!(matches!(
            PAryFunction::hk_binomial(field(3, 2)),
            Err(BentError::BadDegree { .. })
        ));
        assert_eq!(
            PAryFunction::dillon(field(3, 3), &[], 2, Elem::ZERO).unwrap_err(),
            BentError::OddDegree(3)
        );
        assert_eq!(
            PAryFunction::dillon(field(3, 2), &[], 3, Elem::ZERO).unwrap_err(),
            BentError::BadDivisor { e: 3 }
        );
    }

    #[test]
    fn cm_with_i1_is_quadratic() {
        let ctx = field(3, 3);
        let c = ctx.gen_pow(5);
        let cm = PAryFunction::coulter_matthews(ctx.clone(), c, 1).unwrap();
        let q = PAryFunction::quadratic(ctx, &[(0, c)]).unwrap();
        assert_eq!(cm.values(), q.values());
    }

    #[test]
    fn dillon_zero_parameters() {
        let f = PAryFunction::dillon(field(3, 2), &[], 4, Elem::ZERO).unwrap();
        assert!(f.values().iter().all(|&v| v == 0));
    }

    #[test]
    fn dual_of_dual_is_reflection() {
        let ctx = field(3, 3);
        let f = PAryFunction::quadratic(ctx.clone(), &[(0, ctx.generator())]).unwrap();
        let prof = f.analyze().unwrap();
        let g = dual_function(&f, &prof).unwrap();
        let gprof = g.analyze().unwrap();
        let s = Sign::from_i64(minus_one_symbol(3) as i64);
        assert_eq!(gprof.sign(), Some(s * prof.sign().unwrap()));
        let gg = gprof.dual().unwrap();
        for x in ctx.elements() {
            assert_eq!(gg[x.index() as usize], f.eval(ctx.neg(x)));
        }
    }

    #[test]
    fn non_weakly_regular_has_no_dual() {
        let f = PAryFunction::zero(field(3, 2));
        let prof = f.analyze().unwrap();
        assert_eq!(dual_function(&f, &prof).unwrap_err(), BentError::NotWeaklyRegular);
    }
}
