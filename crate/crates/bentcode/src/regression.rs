//! The worked examples with their stated parameters, and the replay logic.
//!
//! Each example names a monomial `Tr(w^j x^d)` with `w` a primitive element.
//! It is first tried with `w` the context generator; if that does not
//! reproduce the stated data, the other primitive elements `g^t`
//! (ascending `t`, `gcd(t, q-1) = 1`) are tried and the matching `t` is
//! reported.

use std::sync::Arc;

use bentcode_core::bent::{PAryFunction, Sign};
use bentcode_core::codes::{defining_set, CodeSummary, SetKind};
use bentcode_core::gf::{gcd, FieldCtx};
use rayon::ThreadPool;
use serde_json::json;

use crate::parallel;
use crate::report::{Report, Status};

#[derive(Debug, Clone, Copy)]
pub struct WorkedExample {
    pub id: &'static str,
    pub p: u32,
    pub m: u32,
    /// `j` in `w^j`
    pub coeff_power: u64,
    pub exponent: u64,
    pub sets: &'static [SetKind],
    pub punctured: bool,
    pub sign: Sign,
    pub n: u64,
    pub k: u32,
    pub d: u64,
    pub enumerator: &'static str,
}

use SetKind::{Nsq, Sq};

const BOTH: &[SetKind] = &[Nsq, Sq];
const NSQ: &[SetKind] = &[Nsq];
const SQ: &[SetKind] = &[Sq];

macro_rules! ex {
    ($id:literal, $p:literal, $m:literal, w^$j:literal x^$d:literal, $sets:expr, $punct:literal,
     $sign:ident, [$n:literal, $k:literal, $dd:literal], $en:literal) => {
        WorkedExample {
            id: $id,
            p: $p,
            m: $m,
            coeff_power: $j,
            exponent: $d,
            sets: $sets,
            punctured: $punct,
            sign: Sign::$sign,
            n: $n,
            k: $k,
            d: $dd,
            enumerator: $en,
        }
    };
}

pub const EXAMPLES: &[WorkedExample] = &[
    ex!("ex-252", 3, 6, w^7 x^210, BOTH, false, Plus, [252, 6, 162], "1+476z^162+252z^180"),
    ex!("ex-234", 3, 6, w^0 x^10, BOTH, false, Minus, [234, 6, 144], "1+234z^144+494z^162"),
    ex!("ex-6300", 5, 6, w^0 x^26, BOTH, false, Minus, [6300, 6, 5000], "1+9324z^5000+6300z^5100"),
    ex!("ex-6200", 5, 6, w^1 x^26, BOTH, false, Plus, [6200, 6, 4900], "1+6200z^4900+9424z^5000"),
    ex!("ex-1200", 5, 5, w^0 x^2, NSQ, false, Plus, [1200, 5, 940], "1+1200z^940+1300z^960+624z^1000"),
    ex!("ex-1300", 5, 5, w^0 x^2, SQ, false, Plus, [1300, 5, 1000], "1+624z^1000+1200z^1040+1300z^1060"),
    ex!("ex-60", 3, 5, w^1 x^2, NSQ, false, Minus, [60, 5, 40], "1+24z^40+40z^48+60z^52"),
    ex!("ex-40", 3, 5, w^1 x^2, SQ, false, Minus, [40, 5, 28], "1+40z^28+60z^32+24z^40"),
    ex!("ex-15p", 3, 4, w^0 x^2, BOTH, true, Minus, [15, 4, 9], "1+50z^9+30z^12"),
    ex!("ex-12p", 3, 4, w^1 x^2, BOTH, true, Plus, [12, 4, 6], "1+24z^6+56z^9"),
    ex!("ex-126p", 3, 6, w^1 x^2, BOTH, true, Plus, [126, 6, 81], "1+476z^81+252z^90"),
    ex!("ex-65p", 5, 4, w^0 x^2, BOTH, true, Minus, [65, 4, 50], "1+364z^50+260z^55"),
    ex!("ex-60p", 5, 4, w^1 x^2, BOTH, true, Plus, [60, 4, 45], "1+240z^45+384z^50"),
    ex!("ex-36p", 3, 5, w^0 x^2, NSQ, true, Plus, [36, 5, 21], "1+72z^21+90z^24+80z^27"),
    ex!("ex-45p", 3, 5, w^1 x^2, NSQ, true, Minus, [45, 5, 27], "1+80z^27+72z^30+90z^33"),
    ex!("ex-6p", 3, 3, w^1 x^2, SQ, true, Minus, [6, 3, 3], "1+8z^3+6z^4+12z^5"),
    ex!("ex-10p", 5, 3, w^1 x^2, SQ, true, Minus, [10, 3, 7], "1+40z^7+60z^8+24z^10"),
    ex!("ex-21p", 7, 3, w^0 x^2, SQ, true, Plus, [21, 3, 17], "1+126z^17+168z^18+48z^21"),
];

pub fn find(id: &str) -> Option<&'static WorkedExample> {
    EXAMPLES.iter().find(|e| e.id == id)
}

/// What one attempt produced.
#[derive(Debug, Clone)]
pub struct Attempt {
    /// `w = g^t`
    pub t: u64,
    pub sign: Option<Sign>,
    pub codes: Vec<(SetKind, CodeSummary)>,
}

impl WorkedExample {
    pub fn matches(&self, a: &Attempt) -> bool {
        a.sign == Some(self.sign)
            && a.codes.iter().all(|(_, cs)| {
                cs.n == self.n
                    && cs.k == self.k
                    && cs.d == Some(self.d)
                    && cs.weight_enumerator() == self.enumerator
            })
    }

    pub fn attempt(&self, pool: &ThreadPool, ctx: &Arc<FieldCtx>, t: u64) -> Attempt {
        let w = ctx.gen_pow(t);
        let c = ctx.pow(w, self.coeff_power);
        let f = PAryFunction::monomial(ctx.clone(), c, self.exponent);
        let sign = parallel::walsh_profile(pool, &f).ok().and_then(|p| p.sign());
        let codes = self
            .sets
            .iter()
            .filter_map(|&kind| {
                let set = defining_set(&f, kind, self.punctured).ok()?;
                let cs = parallel::build_code(pool, &set).ok()?;
                Some((kind, cs))
            })
            .collect();
        Attempt { t, sign, codes }
    }

    /// Tries `w = g`, then the remaining primitive elements.
    pub fn replay(&self, pool: &ThreadPool) -> (bool, Attempt) {
        let ctx = Arc::new(FieldCtx::new(self.p, self.m).expect("example fields are small"));
        let first = self.attempt(pool, &ctx, 1);
        if self.matches(&first) || self.coeff_power == 0 {
            return (self.matches(&first), first);
        }
        let n = ctx.q() as u64 - 1;
        for t in (2..n).filter(|&t| gcd(t, n) == 1) {
            let a = self.attempt(pool, &ctx, t);
            if self.matches(&a) {
                return (true, a);
            }
        }
        (false, first)
    }

    pub fn describe(&self) -> String {
        let c = match self.coeff_power {
            0 => String::new(),
            1 => "w".to_string(),
            j => format!("w^{j}"),
        };
        let sets: Vec<&str> = self.sets.iter().map(|s| s.name()).collect();
        format!(
            "p={} m={} Tr({c}x^{}) {}{}",
            self.p,
            self.m,
            self.exponent,
            sets.join("&"),
            if self.punctured { " punctured" } else { "" }
        )
    }
}

/// Replays the given examples into one report line each.
pub fn replay_into(report: &mut Report, pool: &ThreadPool, examples: &[&WorkedExample]) {
    for ex in examples {
        let (ok, a) = ex.replay(pool);
        let observed: Vec<_> = a
            .codes
            .iter()
            .map(|(kind, cs)| {
                json!({
                    "set_kind": kind.name(),
                    "n": cs.n,
                    "k": cs.k,
                    "d": cs.d,
                    "enumerator": cs.weight_enumerator(),
                })
            })
            .collect();
        let shown = a
            .codes
            .first()
            .map(|(_, cs)| {
                format!(
                    "[{},{},{}] {}",
                    cs.n,
                    cs.k,
                    cs.d.map_or("-".to_string(), |d| d.to_string()),
                    cs.weight_enumerator()
                )
            })
            .unwrap_or_default();
        let message = if ok {
            format!("{} -> {} (w = g^{})", ex.describe(), shown, a.t)
        } else {
            format!(
                "{} expected [{},{},{}] {} eps={}, got {} eps={:?}",
                ex.describe(),
                ex.n,
                ex.k,
                ex.d,
                ex.enumerator,
                ex.sign.value(),
                shown,
                a.sign.map(|s| s.value())
            )
        };
        report.push(
            ex.id,
            Status::from_bool(ok),
            message,
            json!({
                "expected": {
                    "n": ex.n, "k": ex.k, "d": ex.d,
                    "enumerator": ex.enumerator, "sign": ex.sign.value(),
                },
                "observed": observed,
                "observed_sign": a.sign.map(|s| s.value()),
                "w_exponent": a.t,
            }),
        );
    }
}
