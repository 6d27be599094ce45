//! Per-β work spread over a rayon pool. Every map is an indexed collect, so
//! output order (and therefore every report) is independent of the pool size.

use bentcode_core::bent::{BentError, PAryFunction, WalshProfile};
use bentcode_core::codes::{CodeError, CodeSummary, DefiningSet};
use bentcode_core::predict::lemmas::verify_lemmas_with;
use bentcode_core::predict::{BetaObservation, LemmaReport, PredictError};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// `None` or `Some(0)` means one thread per available core.
pub fn pool(workers: Option<usize>) -> Result<ThreadPool, ThreadPoolBuildError> {
    ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
}

pub fn walsh_profile(pool: &ThreadPool, f: &PAryFunction) -> Result<WalshProfile, BentError> {
    let ctx = f.ctx();
    let walsh = pool.install(|| {
        (0..ctx.q())
            .into_par_iter()
            .map(|i| f.walsh_value(ctx.elem(i).expect("index below q")))
            .collect()
    });
    WalshProfile::from_walsh(ctx.p(), ctx.m(), walsh)
}

pub fn build_code(pool: &ThreadPool, set: &DefiningSet) -> Result<CodeSummary, CodeError> {
    if set.is_empty() {
        return Err(CodeError::EmptySet);
    }
    let ctx = set.ctx();
    let weights: Vec<u64> = pool.install(|| {
        (0..ctx.q())
            .into_par_iter()
            .map(|i| set.codeword_weight(ctx.elem(i).expect("index below q")))
            .collect()
    });
    CodeSummary::from_weights(ctx.p(), ctx.m(), set.len() as u64, &weights)
}

pub fn verify_lemmas(
    pool: &ThreadPool,
    f: &PAryFunction,
    profile: &WalshProfile,
) -> Result<Vec<LemmaReport>, PredictError> {
    let dual = profile.dual().ok_or(PredictError::NotWeaklyRegular)?;
    let ctx = f.ctx();
    let obs = pool.install(|| {
        (1..ctx.q())
            .into_par_iter()
            .map(|i| BetaObservation::observe(f, &dual, ctx.elem(i).expect("index below q")))
            .collect::<Result<Vec<_>, _>>()
    })?;
    verify_lemmas_with(f, profile, &obs)
}
