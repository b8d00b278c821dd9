use std::fmt::Write as _;

use orbiflip::cech::cech_cohomology;
use orbiflip::checks::{pushforward_agreement, serre_duality_check};
use orbiflip::functors::{
    adjunction_check, apply_traced, describe, equivalence_suite, example51_sequence, example51_verify, line_on,
    FunctorName, FunctorSpec, VerificationReport,
};
use orbiflip::resolution::threshold_generators;
use orbiflip::{
    atlas_report, canonical_extension, classify, minimal_resolution_degrees, normalize, verify_degree_bounds, Space,
    TwistClass, WeightSequence,
};
use serde_json::{json, Value};

use crate::{CliError, Command, KRange, RunConfig, SideArg, Suite, DEFAULT_BOX, PUSHFORWARD_BOX, SCHEMA};

/// Rendered result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    /// False when a verification or bound check failed.
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let seq: WeightSequence = cfg.sequence.parse()?;
    let (text, result, passed) = match &cfg.command {
        Command::Analyze => analyze(&seq)?,
        Command::Resolve { side } => resolve(&seq, *side, cfg.k_required()?)?,
        Command::Transform { functor } => transform(&seq, functor, cfg.k_required()?)?,
        Command::Verify { suite } => verify(&seq, *suite, cfg)?,
        Command::Cohomology { side, q } => cohomology(&seq, *side, *q, cfg.k_required()?, cfg.box_or(DEFAULT_BOX))?,
    };
    let json = json!({
        "schema": SCHEMA,
        "config": cfg,
        "passed": passed,
        "result": result,
    });
    Ok(Outcome { text, json, passed })
}

type Rendered = (String, Value, bool);

fn analyze(seq: &WeightSequence) -> Result<Rendered, CliError> {
    let trace = normalize(seq);
    let norm = &trace.output;
    let class = classify(norm);
    let atlas = atlas_report(norm)?;
    let extension = (norm.klevel() > 0).then(|| canonical_extension(norm)).transpose()?;
    let mut t = String::new();
    writeln!(t, "sequence   {seq}").ok();
    if norm != seq {
        writeln!(t, "normalized {norm} (gcd {}, factors {:?})", trace.global_gcd, trace.lcm_factors).ok();
    }
    write!(t, "kind       {:?}, K-level {}", class.kind, class.klevel).ok();
    if let Some(d) = class.ff_direction {
        write!(t, ", {d:?}").ok();
    }
    if let Some(name) = &class.name {
        write!(t, " ({name})").ok();
    }
    writeln!(t).ok();
    if let Some(ext) = &extension {
        writeln!(t, "canonical extension {ext}").ok();
    }
    for e in &atlas {
        let idx: Vec<String> = e.index.iter().map(usize::to_string).collect();
        let small = if e.small { "" } else { ", not small" };
        writeln!(t, "  {:<2} [{}] {:<16} {}{small}", e.space.to_string(), idx.join(","), e.rendered, e.label).ok();
    }
    let result = json!({
        "normalization": trace,
        "classification": class,
        "canonical_extension": extension.map(|e| e.to_string()),
        "atlas": atlas,
    });
    Ok((t, result, true))
}

fn resolve(seq: &WeightSequence, side: SideArg, ks: KRange) -> Result<Rendered, CliError> {
    let weights = match side {
        SideArg::Minus => seq.a(),
        SideArg::Plus => seq.b(),
        SideArg::Y => return Err(CliError::Config("resolve works on the x (minus) or y (plus) weights".into())),
    };
    if weights.is_empty() {
        return Err(CliError::Config(format!("{seq} has no weights on the {side:?} side")));
    }
    let mut t = String::new();
    let mut tables = Vec::new();
    let mut passed = true;
    for k in ks.iter() {
        let res = minimal_resolution_degrees(weights, k);
        let ok = verify_degree_bounds(&res);
        passed &= ok;
        let rows: Vec<String> = res
            .betti_table()
            .iter()
            .map(|r| {
                let d: Vec<String> = r.degrees.iter().map(i64::to_string).collect();
                format!("{}:{{{}}}", r.l, d.join(","))
            })
            .collect();
        writeln!(t, "I_{k} on {weights:?}: {}  bounds {}", rows.join(" "), if ok { "OK" } else { "VIOLATED" }).ok();
        tables.push(json!({
            "k": k,
            "betti": res.as_map(),
            "generators": threshold_generators(weights, k),
            "bounds_ok": ok,
        }));
    }
    Ok((t, json!({ "weights": weights, "tables": tables }), passed))
}

fn transform(seq: &WeightSequence, functor: &str, ks: KRange) -> Result<Rendered, CliError> {
    let name: FunctorName = functor.parse()?;
    let spec = FunctorSpec::new(seq, name);
    let mut t = String::new();
    let mut images = Vec::new();
    for k in ks.iter() {
        let u = line_on(seq, spec.pull, k)?;
        let trace = apply_traced(&spec, &u)?;
        let input = TwistClass::on(spec.pull, k)?;
        let out = describe(&trace.output);
        writeln!(t, "{name}({input}) on {}:", spec.push).ok();
        for line in &out {
            writeln!(t, "  {line}").ok();
        }
        for p in &trace.pushes {
            writeln!(t, "  push O_Y({},{}) from degree {}: {:?}", p.p, p.q, p.degree, p.rule).ok();
        }
        images.push(json!({ "k": k, "input": input.to_string(), "output": out, "pushes": trace.pushes }));
    }
    let result = json!({
        "functor": name.label(),
        "pull": spec.pull.to_string(),
        "ebar": spec.ebar,
        "push": spec.push.to_string(),
        "images": images,
    });
    Ok((t, result, true))
}

fn verify(seq: &WeightSequence, suite: Suite, cfg: &RunConfig) -> Result<Rendered, CliError> {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let suites: Vec<Suite> = if suite == Suite::All {
        let mut s = Vec::new();
        if seq.n() == 0 {
            s.push(Suite::Serre);
        }
        if seq.m() >= 2 && seq.n() >= 2 {
            if seq.sum_a() <= seq.sum_b() {
                s.extend([Suite::Roundtrip, Suite::Adjunction]);
            } else {
                skipped.push("roundtrip, adjunction: sum(a) > sum(b); swap sides".to_string());
            }
            s.push(Suite::Pushforward);
        }
        if *seq == example51_sequence() {
            s.push(Suite::Example51);
        }
        if s.is_empty() {
            return Err(CliError::Core(orbiflip::Error::Unsupported(format!("no suite applies to {seq}"))));
        }
        s
    } else {
        vec![suite]
    };
    let bound = cfg.box_or(DEFAULT_BOX);
    for s in suites {
        match s {
            Suite::Roundtrip => reports.push(equivalence_suite(seq, cfg.k_or(KRange { lo: 0, hi: 6 }).iter())?),
            Suite::Adjunction => {
                for u in cfg.k_or(KRange { lo: 0, hi: 2 }).iter() {
                    reports.push(adjunction_check(seq, u, u, bound)?);
                }
            }
            Suite::Serre => reports.push(serre_duality_check(seq, cfg.k_or(KRange { lo: -12, hi: 12 }).iter())?),
            Suite::Pushforward => {
                let twists = cfg.k_or(KRange { lo: -6, hi: 6 });
                for side in [Space::Minus, Space::Plus] {
                    reports.push(pushforward_agreement(seq, side, twists.iter(), cfg.box_or(PUSHFORWARD_BOX))?);
                }
            }
            Suite::Example51 => {
                reports.push(example51_verify(seq, cfg.k_or(KRange { lo: -3, hi: 3 }).iter(), bound, false)?)
            }
            Suite::All => unreachable!(),
        }
    }
    let passed = reports.iter().all(|r| r.verdict);
    let mut t = String::new();
    for r in &reports {
        render_report(r, 0, &mut t);
    }
    for s in &skipped {
        writeln!(t, "SKIP {s}").ok();
    }
    writeln!(t, "{}", if passed { "all checks passed" } else { "verification FAILED" }).ok();
    Ok((t, json!({ "reports": reports, "skipped": skipped }), passed))
}

fn render_report(r: &VerificationReport, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    writeln!(out, "{pad}{}", r.summary_line()).ok();
    if !r.verdict || depth == 0 {
        for n in &r.notes {
            writeln!(out, "{pad}  note: {n}").ok();
        }
    }
    for m in &r.mismatches {
        writeln!(out, "{pad}  chart {} at {:?}: got {:?}, expected {:?}", m.chart, m.character, m.got, m.expected).ok();
    }
    for c in &r.children {
        render_report(c, depth + 1, out);
    }
}

/// Character rows printed in text mode; JSON always carries all of them.
const TEXT_ROWS: usize = 40;

fn cohomology(seq: &WeightSequence, side: SideArg, q: i64, ks: KRange, bound: i64) -> Result<Rendered, CliError> {
    let mut t = String::new();
    let mut tables = Vec::new();
    for k in ks.iter() {
        let twist = match side {
            SideArg::Minus => TwistClass::Minus(k),
            SideArg::Plus => TwistClass::Plus(k),
            SideArg::Y => TwistClass::Y(k, q),
        };
        let table = cech_cohomology(seq, twist, bound)?;
        let totals = table.totals();
        let summary: Vec<String> = totals.iter().map(|(d, v)| format!("h^{d} = {v}")).collect();
        let summary = if summary.is_empty() { "0".to_string() } else { summary.join(", ") };
        writeln!(t, "{twist} in box {bound}: {summary}").ok();
        let rows = table.rows();
        for r in rows.iter().take(TEXT_ROWS) {
            writeln!(t, "  {:?} from degree {}: {:?}", r.character, r.min_degree, r.h).ok();
        }
        if rows.len() > TEXT_ROWS {
            writeln!(t, "  ... {} more characters", rows.len() - TEXT_ROWS).ok();
        }
        tables.push(json!({ "twist": twist.to_string(), "totals": totals, "rows": rows }));
    }
    Ok((t, json!({ "tables": tables }), true))
}
