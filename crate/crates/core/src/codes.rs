//! Defining sets and the trace codes `C_D = {(Tr(βd))_{d in D} : β in F_q}`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::Write;

use thiserror::Error;

use crate::bent::PAryFunction;
use crate::gf::{Elem, FieldCtx, ValueClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("set is not a union of F_p^× orbits; cannot puncture")]
    NotPartitionable { witness: Elem },
    #[error("defining set is empty")]
    EmptySet,
    #[error("weight table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetKind {
    /// `{x != 0 : f(x) = 0}`
    Zero,
    /// `{x : f(x)` a nonzero square`}`
    Sq,
    /// `{x : f(x)` a non-square`}`
    Nsq,
}

impl SetKind {
    pub fn name(self) -> &'static str {
        match self {
            SetKind::Zero => "zero",
            SetKind::Sq => "sq",
            SetKind::Nsq => "nsq",
        }
    }

    fn class(self) -> ValueClass {
        match self {
            SetKind::Zero => ValueClass::Zero,
            SetKind::Sq => ValueClass::Square,
            SetKind::Nsq => ValueClass::NonSquare,
        }
    }
}

/// A defining set in ascending index order.
#[derive(Debug, Clone)]
pub struct DefiningSet {
    ctx: Arc<FieldCtx>,
    kind: SetKind,
    punctured: bool,
    elements: Vec<Elem>,
    logs: Vec<u32>,
}

impl DefiningSet {
    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn punctured(&self) -> bool {
        self.punctured
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// `n - #{d in D : Tr(βd) = 0}`.
    pub fn codeword_weight(&self, beta: Elem) -> u64 {
        let Some(b) = beta.log() else { return 0 };
        let tr = &self.ctx.trace_by_log()[b as usize..];
        self.logs.iter().filter(|&&l| tr[l as usize] != 0).count() as u64
    }

    /// Weights of `c_β` for every β, indexed by element index.
    pub fn all_weights(&self) -> Vec<u64> {
        self.ctx.elements().map(|b| self.codeword_weight(b)).collect()
    }
}

/// Builds `D_f`, `D_{f,sq}` or `D_{f,nsq}`, optionally reduced to one
/// representative per `F_p^×` orbit (the element of least discrete log).
pub fn defining_set(f: &PAryFunction, kind: SetKind, punctured: bool) -> Result<DefiningSet, CodeError> {
    let ctx = f.ctx().clone();
    let p = ctx.p();
    let full: Vec<Elem> = ctx
        .nonzero()
        .filter(|&x| ValueClass::of(f.eval(x), p) == kind.class())
        .collect();
    let elements = if punctured {
        let scalars: Vec<Elem> = (2..p).map(|a| ctx.from_prime(a)).collect();
        for &x in &full {
            for &a in &scalars {
                let y = ctx.mul(a, x);
                if ValueClass::of(f.eval(y), p) != kind.class() {
                    return Err(CodeError::NotPartitionable { witness: x });
                }
            }
        }
        let step = (ctx.q() - 1) / (p - 1);
        full.into_iter()
            .filter(|x| x.log().is_some_and(|l| l < step))
            .collect()
    } else {
        full
    };
    let logs = elements.iter().map(|x| x.log().expect("nonzero")).collect();
    Ok(DefiningSet {
        ctx,
        kind,
        punctured,
        elements,
        logs,
    })
}

/// Parameters and weight distribution of a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSummary {
    pub p: u32,
    pub m: u32,
    pub n: u64,
    pub k: u32,
    /// `None` for the zero code.
    pub d: Option<u64>,
    /// Number of β giving the zero codeword; `1` iff `β -> c_β` is injective.
    pub kernel_size: u64,
    /// `(w, A_w)` over distinct codewords, ascending in `w`, including `(0, 1)`.
    pub distribution: Vec<(u64, u64)>,
}

impl CodeSummary {
    /// Aggregates per-β weights (one entry per field element).
    pub fn from_weights(p: u32, m: u32, n: u64, weights: &[u64]) -> Result<CodeSummary, CodeError> {
        let q = (p as usize).pow(m);
        if weights.len() != q {
            return Err(CodeError::TableLength {
                expected: q,
                found: weights.len(),
            });
        }
        let mut sorted = weights.to_vec();
        sorted.sort_unstable();
        let mut raw: Vec<(u64, u64)> = Vec::new();
        for w in sorted {
            match raw.last_mut() {
                Some((lw, c)) if *lw == w => *c += 1,
                _ => raw.push((w, 1)),
            }
        }
        let kernel_size = raw[0].1;
        debug_assert_eq!(raw[0].0, 0);
        let mut dim_loss = 0;
        let mut kk = kernel_size;
        while kk > 1 {
            kk /= p as u64;
            dim_loss += 1;
        }
        let distribution: Vec<(u64, u64)> = raw
            .into_iter()
            .map(|(w, c)| (w, c / kernel_size))
            .collect();
        let d = distribution.iter().map(|&(w, _)| w).find(|&w| w > 0);
        Ok(CodeSummary {
            p,
            m,
            n,
            k: m - dim_loss,
            d,
            kernel_size,
            distribution,
        })
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_size == 1
    }

    /// Nonzero weights only.
    pub fn nonzero_weights(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.distribution.iter().copied().filter(|&(w, _)| w > 0)
    }

    /// `1+A_1z^w_1+...` in ascending weight order.
    pub fn weight_enumerator(&self) -> String {
        let mut s = String::new();
        for &(w, a) in &self.distribution {
            if w == 0 {
                let _ = write!(s, "{a}");
            } else {
                let _ = write!(s, "+{a}z^{w}");
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

pub fn build_code(set: &DefiningSet) -> Result<CodeSummary, CodeError> {
    if set.is_empty() {
        return Err(CodeError::EmptySet);
    }
    let ctx = set.ctx();
    CodeSummary::from_weights(ctx.p(), ctx.m(), set.len() as u64, &set.all_weights())
}

/// `#{x in F_q : pred(f(x)) and Tr(βx) = 0}` by direct enumeration.
pub fn count_oracle(f: &PAryFunction, beta: Elem, pred: impl Fn(u32) -> bool) -> u64 {
    let ctx = f.ctx();
    ctx.elements()
        .filter(|&x| pred(f.eval(x)) && ctx.tr(ctx.mul(beta, x)) == 0)
        .count() as u64
}
