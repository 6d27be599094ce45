//! The subcommands, as functions from a job to a [`Report`].

use std::sync::Arc;

use bentcode_core::bent::{dual_function, PAryFunction, RfCertificate, RfFailure, Sign, WalshProfile};
use bentcode_core::codes::{defining_set, CodeError, SetKind};
use bentcode_core::gf::{minus_one_symbol, FieldCtx};
use bentcode_core::predict::{
    griesmer, predict_distribution, predict_sign, LemmaValue, Regime, TableId,
};
use rayon::ThreadPool;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::jobspec::{parse_terms, FamilyTag, FunctionSpec, SpecError};
use crate::parallel;
use crate::regression::{self, EXAMPLES};
use crate::report::{sign_json, CodeSummaryJson, Report, Status};

/// Input that cannot be run at all (exit code 2).
#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Invalid(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

fn invalid(e: impl std::fmt::Display) -> CommandError {
    CommandError::Invalid(e.to_string())
}

fn job(command: &str, spec: &FunctionSpec) -> Value {
    json!({
        "command": command,
        "p": spec.p,
        "m": spec.m,
        "family": spec.family.name(),
        "params": spec.params_json(),
    })
}

/// SHA-256 of the dual table, one byte per value.
pub fn dual_hash(dual: &[u32]) -> String {
    let bytes: Vec<u8> = dual.iter().map(|&v| v as u8).collect();
    hex::encode(Sha256::digest(&bytes))
}

fn rf_json(rf: &RfCertificate) -> Value {
    match rf {
        RfCertificate::Member { h } => json!({ "member": true, "h": h }),
        RfCertificate::NotMember(RfFailure::NonzeroAtZero { value }) => {
            json!({ "member": false, "f0": value })
        }
        RfCertificate::NotMember(RfFailure::Scaling { witnesses }) => json!({
            "member": false,
            "witnesses": witnesses
                .iter()
                .map(|w| json!({ "h": w.h, "a": w.a, "x": w.x.index() }))
                .collect::<Vec<_>>(),
        }),
    }
}

fn rf_message(rf: &RfCertificate) -> String {
    match rf {
        RfCertificate::Member { h } => format!("in RF with h = {h}"),
        RfCertificate::NotMember(RfFailure::NonzeroAtZero { value }) => {
            format!("not in RF: f(0) = {value}")
        }
        RfCertificate::NotMember(RfFailure::Scaling { witnesses }) => {
            let parts: Vec<String> = witnesses
                .iter()
                .map(|w| format!("h={}: f({}x) != {}^h f(x) at x=#{}", w.h, w.a, w.a, w.x.index()))
                .collect();
            format!("not in RF: {}", parts.join("; "))
        }
    }
}

fn sign_text(s: Option<Sign>) -> String {
    match s {
        Some(s) => format!("{:+}", s.value()),
        None => "none".to_string(),
    }
}

fn walsh_line(report: &mut Report, prof: &WalshProfile) {
    report.push(
        "walsh",
        Status::Info,
        format!(
            "bent={} weakly_regular={} regular={} eps={}",
            prof.is_bent(),
            prof.is_weakly_regular(),
            prof.is_regular(),
            sign_text(prof.sign())
        ),
        json!({
            "bent": prof.is_bent(),
            "weakly_regular": prof.is_weakly_regular(),
            "regular": prof.is_regular(),
            "sign": sign_json(prof.sign()),
        }),
    );
}

fn sign_line(report: &mut Report, ctx: &FieldCtx, f: &PAryFunction, prof: &WalshProfile) {
    match predict_sign(ctx, f.family()) {
        Ok(pred) => {
            let ok = prof.sign() == Some(pred);
            report.push(
                "sign",
                Status::from_bool(ok),
                format!("predicted {:+}, observed {}", pred.value(), sign_text(prof.sign())),
                json!({ "predicted": pred.value(), "observed": sign_json(prof.sign()) }),
            );
        }
        Err(e) => report.push("sign", Status::Info, e.to_string(), Value::Null),
    }
}

pub fn analyze(pool: &ThreadPool, spec: &FunctionSpec) -> Result<Report, CommandError> {
    let ctx = spec.build_field()?;
    let f = spec.build(ctx.clone())?;
    let mut report = Report::new(job("analyze", spec));
    let prof = parallel::walsh_profile(pool, &f).map_err(invalid)?;
    walsh_line(&mut report, &prof);
    let rf = f.rf_check();
    report.push("rf", Status::Info, rf_message(&rf), rf_json(&rf));
    sign_line(&mut report, &ctx, &f, &prof);

    if let (Some(eps), Some(dual)) = (prof.sign(), prof.dual()) {
        report.push(
            "dual",
            Status::Info,
            format!("sha256 {}", dual_hash(&dual)),
            json!({ "sha256": dual_hash(&dual) }),
        );
        let g = dual_function(&f, &prof).map_err(invalid)?;
        let gprof = parallel::walsh_profile(pool, &g).map_err(invalid)?;
        let expect = Sign::from_i64((minus_one_symbol(ctx.p()) as i64).pow(ctx.m())) * eps;
        report.push(
            "dual-sign",
            Status::from_bool(gprof.sign() == Some(expect)),
            format!("expected {:+}, observed {}", expect.value(), sign_text(gprof.sign())),
            json!({ "expected": expect.value(), "observed": sign_json(gprof.sign()) }),
        );
        let reflect_ok = gprof.dual().is_some_and(|gg| {
            ctx.elements()
                .all(|x| gg[x.index() as usize] == f.eval(ctx.neg(x)))
        });
        report.push(
            "dual-of-dual",
            Status::from_bool(reflect_ok),
            "f**(x) = f(-x)",
            json!({ "holds": reflect_ok }),
        );
        if rf.is_member() {
            report.push(
                "dual-zero",
                Status::from_bool(dual[0] == 0),
                format!("f*(0) = {}", dual[0]),
                json!({ "value": dual[0] }),
            );
            let grf = g.rf_check();
            report.push(
                "dual-rf",
                Status::from_bool(grf.is_member()),
                rf_message(&grf),
                rf_json(&grf),
            );
        }
    }
    Ok(report)
}

fn code_lines(
    report: &mut Report,
    pool: &ThreadPool,
    spec: &FunctionSpec,
    f: &PAryFunction,
    prof: &WalshProfile,
    rf_member: bool,
    kind: SetKind,
    punctured: bool,
) -> Result<(), CodeError> {
    let ctx = f.ctx();
    let set = defining_set(f, kind, punctured)?;
    let cs = parallel::build_code(pool, &set)?;
    let label = format!("code {}{}", kind.name(), if punctured { " punctured" } else { "" });
    let d_text = cs.d.map_or("-".to_string(), |d| d.to_string());
    report.push(
        label.clone(),
        Status::Info,
        format!("[{},{},{}] {}", cs.n, cs.k, d_text, cs.weight_enumerator()),
        CodeSummaryJson::new(&cs, spec.family.name(), spec.params_json(), kind, punctured).to_value(),
    );

    match (prof.sign(), rf_member) {
        (Some(eps), true) => {
            let table = TableId::for_code(kind, punctured, ctx.m());
            match predict_distribution(table, ctx.p(), ctx.m(), eps) {
                Ok(pred) => {
                    let ok = pred.matches(&cs);
                    let dist: Vec<[u64; 2]> = pred.distribution().iter().map(|&(w, a)| [w, a]).collect();
                    report.push(
                        format!("predict {label}"),
                        Status::from_bool(ok),
                        format!("table {} n={} {}", table.name(), pred.n, if ok { "matches" } else { "differs" }),
                        json!({ "table": table.name(), "n": pred.n, "k": pred.k, "distribution": dist }),
                    );
                }
                Err(e) => report.push(format!("predict {label}"), Status::Info, e.to_string(), Value::Null),
            }
        }
        _ => report.push(
            format!("predict {label}"),
            Status::Info,
            "no prediction: needs a weakly regular function in RF",
            Value::Null,
        ),
    }

    if let Some(d) = cs.d {
        let g = griesmer(cs.n, cs.k, d, ctx.p());
        report.push(
            format!("griesmer {label}"),
            Status::Info,
            format!(
                "g = {}, meets_bound = {}, next_d_excluded = {}",
                g.bound_value, g.meets_bound, g.next_d_excluded
            ),
            json!({
                "bound_value": g.bound_value,
                "meets_bound": g.meets_bound,
                "next_d_excluded": g.next_d_excluded,
            }),
        );
    }
    Ok(())
}

pub fn code(
    pool: &ThreadPool,
    spec: &FunctionSpec,
    kind: SetKind,
    punctured: bool,
) -> Result<Report, CommandError> {
    let ctx = spec.build_field()?;
    let f = spec.build(ctx)?;
    let mut j = job("code", spec);
    j["set_kind"] = json!(kind.name());
    j["punctured"] = json!(punctured);
    let mut report = Report::new(j);
    let prof = parallel::walsh_profile(pool, &f).map_err(invalid)?;
    walsh_line(&mut report, &prof);
    let rf = f.rf_check();
    code_lines(&mut report, pool, spec, &f, &prof, rf.is_member(), kind, punctured).map_err(invalid)?;
    Ok(report)
}

fn regime_text(r: Regime) -> String {
    match r {
        Regime::Global => "global".to_string(),
        Regime::Value(c) => format!("a {c:?}"),
        Regime::Dual(c) => format!("f*(b) {c:?}"),
        Regime::Coefficient(c) => format!("a {c:?}"),
    }
}

fn value_json(v: &LemmaValue) -> Value {
    match v {
        LemmaValue::Int(n) => json!(n),
        LemmaValue::Cyc(z) => json!(z.to_string()),
    }
}

pub fn lemmas(pool: &ThreadPool, spec: &FunctionSpec) -> Result<Report, CommandError> {
    let ctx = spec.build_field()?;
    let f = spec.build(ctx)?;
    let prof = parallel::walsh_profile(pool, &f).map_err(invalid)?;
    if !prof.is_weakly_regular() {
        return Err(invalid("function is not weakly regular bent"));
    }
    let rf = f.rf_check();
    if !rf.is_member() {
        return Err(invalid(rf_message(&rf)));
    }
    let mut report = Report::new(job("lemmas", spec));
    walsh_line(&mut report, &prof);
    let reports = parallel::verify_lemmas(pool, &f, &prof).map_err(invalid)?;
    for r in reports {
        let message = format!(
            "over {} case(s): predicted {}",
            r.cases,
            value_json(&r.predicted)
        );
        report.push(
            format!("{} [{}]", r.lemma.name(), regime_text(r.regime)),
            Status::from_bool(r.matched),
            if r.matched {
                message
            } else {
                format!("{message}, observed {}", value_json(&r.observed))
            },
            json!({
                "cases": r.cases,
                "predicted": value_json(&r.predicted),
                "observed": value_json(&r.observed),
                "witness": r.witness.map(|w| w.index()),
            }),
        );
    }
    Ok(report)
}

pub fn verify_paper(pool: &ThreadPool, id: Option<&str>) -> Result<Report, CommandError> {
    let selected: Vec<_> = match id {
        Some(id) => vec![regression::find(id).ok_or_else(|| invalid(format!("unknown example id {id:?}")))?],
        None => EXAMPLES.iter().collect(),
    };
    let mut report = Report::new(json!({ "command": "verify-paper", "id": id }));
    regression::replay_into(&mut report, pool, &selected);
    Ok(report)
}

/// The parameters `scan` uses for each family.
pub fn default_spec(p: u32, m: u32, family: FamilyTag) -> Option<FunctionSpec> {
    let mut spec = FunctionSpec::new(p, m, family);
    match family {
        FamilyTag::Zero | FamilyTag::HkTernary | FamilyTag::HkBinomial => {}
        FamilyTag::Quad => spec.terms = parse_terms("0:1").ok()?,
        FamilyTag::Dillon => spec.terms = parse_terms("1:1").ok()?,
        FamilyTag::Cm => {
            spec.terms = parse_terms("1").ok()?;
            spec.i = Some(3);
        }
        FamilyTag::Mono => return None,
    }
    Some(spec)
}

pub const VARIANTS: [(SetKind, bool); 6] = [
    (SetKind::Zero, false),
    (SetKind::Zero, true),
    (SetKind::Nsq, false),
    (SetKind::Nsq, true),
    (SetKind::Sq, false),
    (SetKind::Sq, true),
];

pub fn scan(
    pool: &ThreadPool,
    ps: &[u32],
    ms: &[u32],
    families: &[FamilyTag],
) -> Result<Report, CommandError> {
    let mut report = Report::new(json!({
        "command": "scan",
        "p": ps,
        "m": ms,
        "family": families.iter().map(|f| f.name()).collect::<Vec<_>>(),
    }));
    for &p in ps {
        for &m in ms {
            for &fam in families {
                let tag = format!("p={p} m={m} {}", fam.name());
                let Some(spec) = default_spec(p, m, fam) else {
                    report.push(tag, Status::Info, "skipped: family needs explicit parameters", Value::Null);
                    continue;
                };
                let built = spec
                    .build_field()
                    .and_then(|ctx| Ok((ctx.clone(), spec.build(ctx)?)));
                let (ctx, f): (Arc<FieldCtx>, PAryFunction) = match built {
                    Ok(v) => v,
                    Err(e) => {
                        report.push(tag, Status::Info, format!("skipped: {e}"), Value::Null);
                        continue;
                    }
                };
                let prof = parallel::walsh_profile(pool, &f).map_err(invalid)?;
                let rf = f.rf_check();
                report.push(
                    tag.clone(),
                    Status::Info,
                    format!(
                        "bent={} eps={} {}",
                        prof.is_bent(),
                        sign_text(prof.sign()),
                        rf_message(&rf)
                    ),
                    json!({ "bent": prof.is_bent(), "sign": sign_json(prof.sign()), "rf": rf_json(&rf) }),
                );
                sign_line(&mut report, &ctx, &f, &prof);
                for (kind, punctured) in VARIANTS {
                    if let Err(e) = code_lines(&mut report, pool, &spec, &f, &prof, rf.is_member(), kind, punctured) {
                        report.push(
                            format!("code {} {}", kind.name(), if punctured { "punctured" } else { "" }),
                            Status::Info,
                            format!("skipped: {e}"),
                            Value::Null,
                        );
                    }
                }
            }
        }
    }
    Ok(report)
}
