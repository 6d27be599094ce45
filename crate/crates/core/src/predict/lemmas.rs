//! Character-sum and counting identities for weakly regular functions in RF,
//! checked against brute-force enumeration.

use alloc::vec;
use alloc::vec::Vec;

use super::PredictError;
use crate::bent::{PAryFunction, Sign, WalshProfile};
use crate::cyclotomic::{gauss_sum, sqrt_pstar_pow, CycError, CycInt};
use crate::gf::{minus_one_symbol, Elem, ValueClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lemma {
    /// `N_f(a) = #{x : f(x) = a}`
    PreimageCount,
    /// `N_{f*}(a)`
    DualPreimageCount,
    /// `sum_{y != 0} sum_x ζ^(y f(x))`
    SumYf,
    /// `sum_{y,z != 0} sum_x ζ^(y f(x) + z Tr(βx))`
    SumYfZtr,
    /// `N_{f,β} = #{x : f(x) = 0, Tr(βx) = 0}`
    ZeroHyperplaneCount,
    /// `sum_{y != 0} sum_x ζ^(y^2 f(x))`
    SumY2f,
    /// `sum_{y,z != 0} sum_x ζ^(y^2 f(x) + z Tr(βx))`
    SumY2fZtr,
    /// `N_{sq,β}`
    SqHyperplaneCount,
    /// `N_{nsq,β}`
    NsqHyperplaneCount,
    /// `sum_x ζ^(Tr(a x^2))`, a property of the field alone
    QuadraticGaussSum,
}

impl Lemma {
    pub fn name(self) -> &'static str {
        match self {
            Lemma::PreimageCount => "N_f(a)",
            Lemma::DualPreimageCount => "N_f*(a)",
            Lemma::SumYf => "sum_y zeta^(y f)",
            Lemma::SumYfZtr => "sum_yz zeta^(y f + z Tr(bx))",
            Lemma::ZeroHyperplaneCount => "N_f,b",
            Lemma::SumY2f => "sum_y zeta^(y^2 f)",
            Lemma::SumY2fZtr => "sum_yz zeta^(y^2 f + z Tr(bx))",
            Lemma::SqHyperplaneCount => "N_sq,b",
            Lemma::NsqHyperplaneCount => "N_nsq,b",
            Lemma::QuadraticGaussSum => "sum zeta^Tr(ax^2)",
        }
    }
}

/// Which case of a lemma a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    Global,
    /// class of the argument `a` of a preimage count
    Value(ValueClass),
    /// class of `f*(β)`
    Dual(ValueClass),
    /// class of the coefficient `a` under `η`
    Coefficient(ValueClass),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaValue {
    Int(i64),
    Cyc(CycInt),
}

/// One lemma in one regime, over every instance of that regime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub regime: Regime,
    pub p: u32,
    pub m: u32,
    pub sign: Sign,
    /// instances checked
    pub cases: u64,
    pub predicted: LemmaValue,
    /// equal to `predicted` unless some instance disagreed, then the first such value
    pub observed: LemmaValue,
    pub matched: bool,
    /// the first disagreeing instance (`a` or `β` as a field element)
    pub witness: Option<Elem>,
}

/// Brute-force quantities for one nonzero `β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaObservation {
    pub beta: Elem,
    pub dual_value: u32,
    pub n_zero: i64,
    pub n_sq: i64,
    pub n_nsq: i64,
    pub sum_yz: CycInt,
    pub sum_y2z: CycInt,
}

impl BetaObservation {
    /// Enumerates `x` once, tallying `(f(x), Tr(βx))`.
    pub fn observe(f: &PAryFunction, dual: &[u32], beta: Elem) -> Result<BetaObservation, CycError> {
        let ctx = f.ctx();
        let p = ctx.p() as usize;
        let mut joint = vec![0i64; p * p];
        for x in ctx.elements() {
            let t = ctx.tr(ctx.mul(beta, x)) as usize;
            joint[f.eval(x) as usize * p + t] += 1;
        }
        let mut n_sq = 0;
        let mut n_nsq = 0;
        for a in 1..p {
            match ValueClass::of(a as u32, p as u32) {
                ValueClass::Square => n_sq += joint[a * p],
                _ => n_nsq += joint[a * p],
            }
        }
        let mut yz = vec![0i64; p];
        let mut y2z = vec![0i64; p];
        for a in 0..p {
            for b in 0..p {
                let h = joint[a * p + b];
                if h == 0 {
                    continue;
                }
                for y in 1..p {
                    for z in 1..p {
                        yz[(y * a + z * b) % p] += h;
                        y2z[(y * y % p * a + z * b) % p] += h;
                    }
                }
            }
        }
        Ok(BetaObservation {
            beta,
            dual_value: dual[beta.index() as usize],
            n_zero: joint[0],
            n_sq,
            n_nsq,
            sum_yz: CycInt::from_exponent_counts(p as u32, &yz),
            sum_y2z: CycInt::from_exponent_counts(p as u32, &y2z),
        })
    }
}

struct Collector {
    p: u32,
    m: u32,
    sign: Sign,
    reports: Vec<LemmaReport>,
}

impl Collector {
    fn record(&mut self, lemma: Lemma, regime: Regime, predicted: LemmaValue, observed: LemmaValue, at: Elem) {
        let idx = match self
            .reports
            .iter()
            .position(|r| r.lemma == lemma && r.regime == regime)
        {
            Some(i) => i,
            None => {
                self.reports.push(LemmaReport {
                    lemma,
                    regime,
                    p: self.p,
                    m: self.m,
                    sign: self.sign,
                    cases: 0,
                    predicted: predicted.clone(),
                    observed: predicted.clone(),
                    matched: true,
                    witness: None,
                });
                self.reports.len() - 1
            }
        };
        let r = &mut self.reports[idx];
        r.cases += 1;
        if r.matched && observed != predicted {
            r.matched = false;
            r.observed = observed;
            r.witness = Some(at);
        }
    }

    fn int(&mut self, lemma: Lemma, regime: Regime, predicted: i64, observed: i64, at: Elem) {
        self.record(lemma, regime, LemmaValue::Int(predicted), LemmaValue::Int(observed), at);
    }

    fn cyc(&mut self, lemma: Lemma, regime: Regime, predicted: CycInt, observed: CycInt, at: Elem) {
        self.record(lemma, regime, LemmaValue::Cyc(predicted), LemmaValue::Cyc(observed), at);
    }
}

/// Closed form of `N_g(a)` for a weakly regular RF `g` with sign `eps`.
fn preimage_closed_form(p: u32, m: u32, eps: i64, class: ValueClass) -> i64 {
    let pp = p as i64;
    let s = minus_one_symbol(p) as i64;
    let pm1 = pp.pow(m - 1);
    if m % 2 == 0 {
        let lambda = eps * s.pow(m / 2) * pp.pow((m - 2) / 2);
        match class {
            ValueClass::Zero => pm1 + (pp - 1) * lambda,
            _ => pm1 - lambda,
        }
    } else {
        let r1 = (s * pp).pow((m - 1) / 2);
        match class {
            ValueClass::Zero => pm1,
            ValueClass::Square => pm1 + eps * r1,
            ValueClass::NonSquare => pm1 - eps * r1,
        }
    }
}

fn class_sign(c: ValueClass) -> i64 {
    match c {
        ValueClass::Zero => 0,
        ValueClass::Square => 1,
        ValueClass::NonSquare => -1,
    }
}

/// Runs every identity for `f`, observing all nonzero `β` serially.
pub fn verify_lemmas(f: &PAryFunction, profile: &WalshProfile) -> Result<Vec<LemmaReport>, PredictError> {
    let dual = profile.dual().ok_or(PredictError::NotWeaklyRegular)?;
    let obs = f
        .ctx()
        .nonzero()
        .map(|b| BetaObservation::observe(f, &dual, b))
        .collect::<Result<Vec<_>, _>>()?;
    verify_lemmas_with(f, profile, &obs)
}

/// Same as [`verify_lemmas`], with the per-β enumeration supplied by the caller.
pub fn verify_lemmas_with(
    f: &PAryFunction,
    profile: &WalshProfile,
    observations: &[BetaObservation],
) -> Result<Vec<LemmaReport>, PredictError> {
    let ctx = f.ctx();
    let (p, m) = (ctx.p(), ctx.m());
    if m < 2 {
        return Err(PredictError::DegreeTooSmallForLemmas);
    }
    let eps = profile.sign().ok_or(PredictError::NotWeaklyRegular)?;
    let dual = profile.dual().ok_or(PredictError::NotWeaklyRegular)?;
    if !f.rf_check().is_member() {
        return Err(PredictError::NotRfMember);
    }
    let e = eps.value();
    let pp = p as i64;
    let s = minus_one_symbol(p) as i64;
    let even = m % 2 == 0;
    let g = gauss_sum(p);
    let gm = sqrt_pstar_pow(p, m)?;
    let one = CycInt::one(p);
    let mut out = Collector {
        p,
        m,
        sign: eps,
        reports: Vec::new(),
    };

    // preimage counts of f and f*
    let mut nf = vec![0i64; p as usize];
    let mut nd = vec![0i64; p as usize];
    for x in ctx.elements() {
        nf[f.eval(x) as usize] += 1;
        nd[dual[x.index() as usize] as usize] += 1;
    }
    let dual_eps = e * s.pow(m);
    for a in 0..p {
        let class = ValueClass::of(a, p);
        let at = ctx.from_prime(a);
        out.int(
            Lemma::PreimageCount,
            Regime::Value(class),
            preimage_closed_form(p, m, e, class),
            nf[a as usize],
            at,
        );
        out.int(
            Lemma::DualPreimageCount,
            Regime::Value(class),
            preimage_closed_form(p, m, dual_eps, class),
            nd[a as usize],
            at,
        );
    }

    // β-free sums
    let mut sy = vec![0i64; p as usize];
    let mut sy2 = vec![0i64; p as usize];
    for (v, &count) in nf.iter().enumerate() {
        for y in 1..p as usize {
            sy[y * v % p as usize] += count;
            sy2[y * y * v % p as usize] += count;
        }
    }
    let scaled_gm = gm.scale(e * (pp - 1))?;
    let pred_sy = if even { scaled_gm.clone() } else { CycInt::zero(p) };
    out.cyc(
        Lemma::SumYf,
        Regime::Global,
        pred_sy,
        CycInt::from_exponent_counts(p, &sy),
        Elem::ZERO,
    );
    out.cyc(
        Lemma::SumY2f,
        Regime::Global,
        scaled_gm.clone(),
        CycInt::from_exponent_counts(p, &sy2),
        Elem::ZERO,
    );

    // β-dependent identities
    let pm2 = pp.pow(m - 2);
    let half = (pp - 1) / 2;
    let lambda = if even {
        e * s.pow(m / 2) * pp.pow((m - 2) / 2)
    } else {
        0
    };
    let (r1, r3) = if even {
        (0, 0)
    } else {
        ((s * pp).pow((m - 1) / 2), (s * pp).pow((m - 3) / 2))
    };
    let sy2z_sq = scaled_gm.checked_mul(&g.checked_sub(&one)?)?;
    let sy2z_nsq = -&scaled_gm.checked_mul(&g.checked_add(&one)?)?;
    let sy2z_zero = scaled_gm.scale(pp - 1)?;
    for o in observations {
        let class = ValueClass::of(o.dual_value, p);
        let regime = Regime::Dual(class);
        let chi = class_sign(class);
        let at = o.beta;

        let pred_yz = match (even, class) {
            (true, ValueClass::Zero) => scaled_gm.scale(pp - 1)?,
            (true, _) => -&scaled_gm,
            (false, ValueClass::Zero) => CycInt::zero(p),
            (false, _) => CycInt::from_integer(
                p,
                e * chi * s.pow((m + 1) / 2) * (pp - 1) * pp.pow((m + 1) / 2),
            ),
        };
        out.cyc(Lemma::SumYfZtr, regime, pred_yz, o.sum_yz.clone(), at);

        let pred_nz = match (even, class) {
            (true, ValueClass::Zero) => pm2 + lambda * (pp - 1),
            (true, _) | (false, ValueClass::Zero) => pm2,
            (false, _) => pm2 + e * chi * s.pow((m + 1) / 2) * (pp - 1) * pp.pow((m - 3) / 2),
        };
        out.int(Lemma::ZeroHyperplaneCount, regime, pred_nz, o.n_zero, at);

        let pred_y2z = match class {
            ValueClass::Zero => sy2z_zero.clone(),
            ValueClass::Square => sy2z_sq.clone(),
            ValueClass::NonSquare => sy2z_nsq.clone(),
        };
        out.cyc(Lemma::SumY2fZtr, regime, pred_y2z, o.sum_y2z.clone(), at);

        let (pred_sq, pred_nsq) = if even {
            let low = half * (pm2 - lambda);
            let high = half * (pm2 + lambda);
            match class {
                ValueClass::Zero => (low, low),
                ValueClass::Square => (high, low),
                ValueClass::NonSquare => (low, high),
            }
        } else {
            match class {
                ValueClass::Zero => (half * (pm2 + e * r1), half * (pm2 - e * r1)),
                ValueClass::Square => (half * (pm2 - e * r3), half * (pm2 - e * r3)),
                ValueClass::NonSquare => (half * (pm2 + e * r3), half * (pm2 + e * r3)),
            }
        };
        out.int(Lemma::SqHyperplaneCount, regime, pred_sq, o.n_sq, at);
        out.int(Lemma::NsqHyperplaneCount, regime, pred_nsq, o.n_nsq, at);
    }

    // sum_x ζ^Tr(a x^2) for a = 1 and the generator
    for a in [Elem::ONE, ctx.generator()] {
        let mut hist = vec![0i64; p as usize];
        for x in ctx.elements() {
            hist[ctx.tr(ctx.mul(a, ctx.mul(x, x))) as usize] += 1;
        }
        let eta = ctx.eta(a).expect("a is nonzero") as i64;
        let sign = if (m - 1) % 2 == 0 { eta } else { -eta };
        let class = if eta == 1 {
            ValueClass::Square
        } else {
            ValueClass::NonSquare
        };
        out.cyc(
            Lemma::QuadraticGaussSum,
            Regime::Coefficient(class),
            gm.scale(sign)?,
            CycInt::from_exponent_counts(p, &hist),
            a,
        );
    }

    Ok(out.reports)
}
