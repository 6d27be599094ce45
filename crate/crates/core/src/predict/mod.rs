//! Closed-form weight distributions, sign formulas and the Griesmer bound.

use alloc::vec::Vec;

use thiserror::Error;

use crate::bent::{Family, Sign};
use crate::codes::{CodeSummary, SetKind};
use crate::cyclotomic::CycError;
use crate::gf::{minus_one_symbol, FieldCtx};

pub mod lemmas;

pub use lemmas::{verify_lemmas, BetaObservation, Lemma, LemmaReport, LemmaValue, Regime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredictError {
    #[error("table {table:?} needs {need} m, got m = {m}")]
    ParityMismatch { table: TableId, m: u32, need: &'static str },
    #[error("m = {m} is too small for table {table:?}")]
    DegreeTooSmall { table: TableId, m: u32 },
    #[error("table {table:?} is not integral for p = {p}, m = {m}")]
    NonIntegral { table: TableId, p: u32, m: u32 },
    #[error("table {table:?} has a negative entry for p = {p}, m = {m}")]
    Negative { table: TableId, p: u32, m: u32 },
    #[error("no sign formula for this family")]
    UnknownFamily,
    #[error("function is not weakly regular bent")]
    NotWeaklyRegular,
    #[error("function is not in RF")]
    NotRfMember,
    #[error("need m >= 2")]
    DegreeTooSmallForLemmas,
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// The ten distribution tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    /// `D_f`, even m
    T1,
    /// `D_f`, odd m
    T2,
    /// punctured `D_f`, even m
    C1,
    /// punctured `D_f`, odd m
    C2,
    /// `D_{f,sq}` and `D_{f,nsq}`, even m
    TEvenSq,
    TOddNsq,
    TOddSq,
    /// punctured sq and nsq, even m
    CEven,
    COddNsq,
    COddSq,
}

impl TableId {
    pub const ALL: [TableId; 10] = [
        TableId::T1,
        TableId::T2,
        TableId::C1,
        TableId::C2,
        TableId::TEvenSq,
        TableId::TOddNsq,
        TableId::TOddSq,
        TableId::CEven,
        TableId::COddNsq,
        TableId::COddSq,
    ];

    pub fn for_code(kind: SetKind, punctured: bool, m: u32) -> TableId {
        let even = m % 2 == 0;
        match (kind, punctured, even) {
            (SetKind::Zero, false, true) => TableId::T1,
            (SetKind::Zero, false, false) => TableId::T2,
            (SetKind::Zero, true, true) => TableId::C1,
            (SetKind::Zero, true, false) => TableId::C2,
            (_, false, true) => TableId::TEvenSq,
            (_, true, true) => TableId::CEven,
            (SetKind::Nsq, false, false) => TableId::TOddNsq,
            (SetKind::Sq, false, false) => TableId::TOddSq,
            (SetKind::Nsq, true, false) => TableId::COddNsq,
            (SetKind::Sq, true, false) => TableId::COddSq,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TableId::T1 => "T1",
            TableId::T2 => "T2",
            TableId::C1 => "C1",
            TableId::C2 => "C2",
            TableId::TEvenSq => "T_evensq",
            TableId::TOddNsq => "T_oddnsq",
            TableId::TOddSq => "T_oddsq",
            TableId::CEven => "C_even",
            TableId::COddNsq => "C_oddnsq",
            TableId::COddSq => "C_oddsq",
        }
    }

    fn even(self) -> bool {
        matches!(
            self,
            TableId::T1 | TableId::C1 | TableId::TEvenSq | TableId::CEven
        )
    }

    fn punctured(self) -> bool {
        matches!(
            self,
            TableId::C1 | TableId::C2 | TableId::CEven | TableId::COddNsq | TableId::COddSq
        )
    }
}

/// A fully evaluated table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedDistribution {
    pub table: TableId,
    pub p: u32,
    pub m: u32,
    pub sign: Sign,
    pub n: u64,
    pub k: u32,
    /// Nonzero weights, ascending, with multiplicities.
    pub rows: Vec<(u64, u64)>,
}

impl PredictedDistribution {
    /// Rows with `(0, 1)` prepended, in the same shape as [`CodeSummary`].
    pub fn distribution(&self) -> Vec<(u64, u64)> {
        let mut d = Vec::with_capacity(self.rows.len() + 1);
        d.push((0, 1));
        d.extend_from_slice(&self.rows);
        d
    }

    pub fn d(&self) -> Option<u64> {
        self.rows.first().map(|&(w, _)| w)
    }

    pub fn matches(&self, cs: &CodeSummary) -> bool {
        self.n == cs.n && self.k == cs.k && self.distribution() == cs.distribution
    }
}

struct Builder {
    table: TableId,
    p: u32,
    m: u32,
}

impl Builder {
    fn div(&self, a: i128, b: i128) -> Result<i128, PredictError> {
        if a % b != 0 {
            return Err(PredictError::NonIntegral {
                table: self.table,
                p: self.p,
                m: self.m,
            });
        }
        Ok(a / b)
    }

    fn nonneg(&self, a: i128) -> Result<u64, PredictError> {
        u64::try_from(a).map_err(|_| PredictError::Negative {
            table: self.table,
            p: self.p,
            m: self.m,
        })
    }
}

/// Evaluates a table at `(p, m, ε)`.
///
/// Odd-m powers `sqrt(p*)^(m-1)`, `sqrt(p*)^(m-3)` are the rationals
/// `(p*)^((m-1)/2)`, `(p*)^((m-3)/2)`.
pub fn predict_distribution(
    table: TableId,
    p: u32,
    m: u32,
    eps: Sign,
) -> Result<PredictedDistribution, PredictError> {
    let even = m % 2 == 0;
    if table.even() != even {
        return Err(PredictError::ParityMismatch {
            table,
            m,
            need: if table.even() { "even" } else { "odd" },
        });
    }
    if m < 2 || (!even && m < 3) {
        return Err(PredictError::DegreeTooSmall { table, m });
    }
    let b = Builder { table, p, m };
    let pp = p as i128;
    let e = eps.value() as i128;
    let s = minus_one_symbol(p) as i128;
    let ps = s * pp;
    let pw = |k: u32| pp.pow(k);
    let pm1 = pw(m - 1);
    let pm2 = pw(m - 2);
    let half = (pp - 1) / 2;

    let (n, rows): (i128, Vec<(i128, i128)>) = if even {
        let lambda = e * s.pow(m / 2) * pw((m - 2) / 2);
        match table {
            TableId::T1 | TableId::C1 => {
                let n = pm1 - 1 + (pp - 1) * lambda;
                let rows = alloc::vec![
                    ((pp - 1) * pm2, pm1 - 1 + (pp - 1) * lambda),
                    ((pp - 1) * (pm2 + lambda), (pp - 1) * (pm1 - lambda)),
                ];
                (n, rows)
            }
            _ => {
                let n = half * (pm1 - lambda);
                let rows = alloc::vec![
                    (
                        (pp - 1) * (pp - 1) / 2 * pm2,
                        (pp + 1) / 2 * pm1 + half * lambda - 1
                    ),
                    (half * ((pp - 1) * pm2 - 2 * lambda), half * (pm1 - lambda)),
                ];
                (n, rows)
            }
        }
    } else {
        let r1 = ps.pow((m - 1) / 2);
        let r3 = ps.pow((m - 3) / 2);
        match table {
            TableId::T2 | TableId::C2 => {
                let a = pw((m - 3) / 2);
                let c = pw((m - 1) / 2);
                let rows = alloc::vec![
                    ((pp - 1) * pm2, pm1 - 1),
                    ((pp - 1) * (pm2 - a), half * (pm1 + c)),
                    ((pp - 1) * (pm2 + a), half * (pm1 - c)),
                ];
                (pm1 - 1, rows)
            }
            TableId::TOddNsq | TableId::COddNsq => {
                let n = half * (pm1 - e * r1);
                let rows = alloc::vec![
                    ((pp - 1) * (pp - 1) / 2 * pm2, pm1 - 1),
                    (
                        half * ((pp - 1) * pm2 + e * (1 - ps) * r3),
                        half * (pm1 + e * s * r1)
                    ),
                    (
                        half * ((pp - 1) * pm2 - e * (1 + ps) * r3),
                        half * (pm1 - e * s * r1)
                    ),
                ];
                (n, rows)
            }
            _ => {
                let n = half * (pm1 + e * r1);
                let rows = alloc::vec![
                    ((pp - 1) * (pp - 1) / 2 * pm2, pm1 - 1),
                    (
                        half * ((pp - 1) * pm2 + e * (1 + ps) * r3),
                        half * (pm1 + e * s * r1)
                    ),
                    (
                        half * ((pp - 1) * pm2 + e * (ps - 1) * r3),
                        half * (pm1 - e * s * r1)
                    ),
                ];
                (n, rows)
            }
        }
    };

    // Punctured tables: same multiplicities, lengths and weights divided by p - 1.
    let (n, rows) = if table.punctured() {
        let n = b.div(n, pp - 1)?;
        let rows = rows
            .into_iter()
            .map(|(w, a)| Ok((b.div(w, pp - 1)?, a)))
            .collect::<Result<Vec<_>, PredictError>>()?;
        (n, rows)
    } else {
        (n, rows)
    };

    let mut out: Vec<(u64, u64)> = Vec::with_capacity(rows.len());
    for (w, a) in rows {
        let (w, a) = (b.nonneg(w)?, b.nonneg(a)?);
        if a == 0 {
            continue;
        }
        out.push((w, a));
    }
    out.sort_unstable();
    let mut merged: Vec<(u64, u64)> = Vec::with_capacity(out.len());
    for (w, a) in out {
        match merged.last_mut() {
            Some((lw, la)) if *lw == w => *la += a,
            _ => merged.push((w, a)),
        }
    }
    // A weight-0 row means β -> c_β has a kernel; count distinct codewords.
    let mut k = m;
    if let Some(&(0, a0)) = merged.first() {
        merged.remove(0);
        let kernel = a0 + 1;
        let mut kk = kernel;
        while kk % p as u64 == 0 {
            kk /= p as u64;
            k -= 1;
        }
        if kk != 1 {
            return Err(PredictError::NonIntegral { table, p, m });
        }
        for row in &mut merged {
            row.1 = b.div(row.1 as i128, kernel as i128)? as u64;
        }
    }
    Ok(PredictedDistribution {
        table,
        p,
        m,
        sign: eps,
        n: b.nonneg(n)?,
        k,
        rows: merged,
    })
}

fn parity_sign(e: u32) -> Sign {
    if e % 2 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// The sign `ε` each family is known to have.
pub fn predict_sign(ctx: &FieldCtx, family: &Family) -> Result<Sign, PredictError> {
    let (p, m) = (ctx.p(), ctx.m());
    let eta_sign = |c| -> Result<Sign, PredictError> {
        let eta = ctx.eta(c).map_err(|_| PredictError::UnknownFamily)?;
        Ok(parity_sign(m - 1) * Sign::from_i64(eta as i64))
    };
    match family {
        Family::Dillon { .. } => Ok(parity_sign((p - 1) * m / 4)),
        Family::HkTernaryMonomial { .. } => Ok(parity_sign(m / 2 + 1)),
        Family::HkBinomial { .. } => Ok(Sign::Minus),
        Family::CoulterMatthews { c, .. } => eta_sign(*c),
        Family::Quadratic { terms } => match terms.as_slice() {
            [(0, a)] => eta_sign(*a),
            _ => Err(PredictError::UnknownFamily),
        },
        Family::Monomial { coeff, exponent: 2 } => eta_sign(*coeff),
        _ => Err(PredictError::UnknownFamily),
    }
}

/// Outcome of the Griesmer test for an `[n, k, d]_p` code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GriesmerStatus {
    /// `g_p(k, d) = sum_{i<k} ceil(d / p^i)`
    pub bound_value: u64,
    pub meets_bound: bool,
    /// `g_p(k, d + 1) > n`: no `[n, k, d + 1]` code exists.
    pub next_d_excluded: bool,
}

pub fn griesmer_sum(k: u32, d: u64, p: u32) -> u64 {
    let mut pi = 1u64;
    let mut total = 0;
    for _ in 0..k {
        total += d.div_ceil(pi);
        pi = pi.saturating_mul(p as u64);
    }
    total
}

pub fn griesmer(n: u64, k: u32, d: u64, p: u32) -> GriesmerStatus {
    let bound_value = griesmer_sum(k, d, p);
    GriesmerStatus {
        bound_value,
        meets_bound: n == bound_value,
        next_d_excluded: griesmer_sum(k, d + 1, p) > n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn odd_nsq_example() {
        let t = predict_distribution(TableId::TOddNsq, 5, 5, Sign::Plus).unwrap();
        assert_eq!(t.n, 1200);
        assert_eq!(t.rows, vec![(940, 1200), (960, 1300), (1000, 624)]);
    }

    #[test]
    fn odd_sq_example() {
        let t = predict_distribution(TableId::TOddSq, 5, 5, Sign::Plus).unwrap();
        assert_eq!(t.n, 1300);
        assert_eq!(t.rows, vec![(1000, 624), (1040, 1200), (1060, 1300)]);
    }

    #[test]
    fn even_punctured_example() {
        let t = predict_distribution(TableId::CEven, 3, 4, Sign::Minus).unwrap();
        assert_eq!(t.n, 15);
        assert_eq!(t.rows, vec![(9, 50), (12, 30)]);
    }

    #[test]
    fn parity_is_checked() {
        assert!(matches!(
            predict_distribution(TableId::T1, 3, 3, Sign::Plus),
            Err(PredictError::ParityMismatch { .. })
        ));
        assert!(matches!(
            predict_distribution(TableId::TOddSq, 3, 4, Sign::Plus),
            Err(PredictError::ParityMismatch { .. })
        ));
    }

    #[test]
    fn totals_and_integrality() {
        for p in [3u32, 5, 7] {
            for m in 2..=6u32 {
                for eps in [Sign::Plus, Sign::Minus] {
                    for t in TableId::ALL {
                        let Ok(d) = predict_distribution(t, p, m, eps) else {
                            assert!(t.even() != (m % 2 == 0) || m < 3);
                            continue;
                        };
                        let total: u64 = d.rows.iter().map(|&(_, a)| a).sum();
                        let kernel = (p as u64).pow(m - d.k);
                        assert_eq!((total + 1) * kernel, (p as u64).pow(m), "{t:?} p={p} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn table_routing() {
        assert_eq!(TableId::for_code(SetKind::Zero, false, 4), TableId::T1);
        assert_eq!(TableId::for_code(SetKind::Sq, true, 4), TableId::CEven);
        assert_eq!(TableId::for_code(SetKind::Nsq, true, 5), TableId::COddNsq);
        assert_eq!(TableId::for_code(SetKind::Zero, true, 5), TableId::C2);
    }

    #[test]
    fn griesmer_values() {
        let g = griesmer(15, 4, 9, 3);
        assert_eq!(g.bound_value, 14);
        assert!(!g.meets_bound && g.next_d_excluded);
        assert_eq!(griesmer_sum(4, 10, 3), 17);
        assert!(griesmer(21, 3, 17, 7).next_d_excluded);
        assert!(!griesmer(12, 4, 6, 3).next_d_excluded);
        for n in 1..20 {
            assert!(griesmer(n, 1, n, 5).meets_bound);
        }
    }
}
