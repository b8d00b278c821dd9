//! The eight acceptance criteria, each exact. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use orbiflip::cech::cover;
use orbiflip::charts::is_small;
use orbiflip::checks::{pushforward_agreement, serre_duality_check};
use orbiflip::functors::{
    apply, as_ideal_twist, equivalence_suite, example51_verify, line_on, FunctorName, FunctorSpec,
};
use orbiflip::*;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn seq(s: &str) -> WeightSequence {
    s.parse().expect("valid sequence")
}

fn betti_sweep() -> Outcome {
    let mut tuples: Vec<Vec<i64>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..4 {
        tuples = tuples
            .iter()
            .flat_map(|t| (1..=6).map(move |a| t.iter().copied().chain([a]).collect::<Vec<i64>>()))
            .collect();
        all.extend(tuples.iter().cloned());
    }
    let mut checked = 0;
    for a in &all {
        for k in 0..=12 {
            let res = minimal_resolution_degrees(a, k);
            checked += 1;
            if !verify_degree_bounds(&res) {
                return Err(format!("bound fails for a = {a:?}, k = {k}"));
            }
        }
    }
    Ok(format!("{} tuples, {checked} resolutions", all.len()))
}

fn pushforward() -> Outcome {
    let mut compared = 0;
    for (s, bound) in [("1,1;1,1", 8), ("1,2;1,1,1", 6), ("1,5;2,3", 8), ("1,2,3;1,5", 6)] {
        let r = pushforward_agreement(&seq(s), Space::Minus, -6..=6, bound).map_err(|e| format!("{s}: {e}"))?;
        if !r.verdict {
            let bad: Vec<String> =
                r.children.iter().filter(|c| !c.verdict).map(|c| format!("{} {:?}", c.name, c.notes)).collect();
            return Err(format!("{s}: {}", bad.join("; ")));
        }
        compared += r.compared;
    }
    Ok(format!("{compared} strands"))
}

fn equivalence() -> Outcome {
    let mut compared = 0;
    for s in ["1,1;1,1", "1,2;1,1,1", "1,2,3;1,5", "1,1;2,1"] {
        let r = equivalence_suite(&seq(s), 0..=6).map_err(|e| format!("{s}: {e}"))?;
        if !r.verdict {
            let bad: Vec<&str> = r.children.iter().filter(|c| !c.verdict).map(|c| c.name.as_str()).collect();
            return Err(format!("{s}: {}", bad.join(", ")));
        }
        compared += r.compared;
    }
    Ok(format!("{compared} strands"))
}

fn f_image() -> Outcome {
    let mut n = 0;
    for s in ["1,1;1,1", "1,2;1,1,1", "1,5;2,3", "1,2,3;1,5", "1,1;2,1"] {
        let seq = seq(s);
        let spec = FunctorSpec::new(&seq, FunctorName::F);
        for k in 0..=8 {
            let out =
                apply(&spec, &line_on(&seq, Space::Minus, k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let got = match as_ideal_twist(&out) {
                Some((Block::X, q, tw)) => Some((q, tw)),
                Some(_) => None,
                None if k == 0 && out.terms(0).len() == 1 && out.range() == Some((0, 0)) => {
                    Some((0, out.twist_of(&out.terms(0)[0])))
                }
                None => None,
            };
            if got != Some((k, TwistClass::Plus(-k))) {
                return Err(format!("{s}, k = {k}: {got:?}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} images"))
}

fn serre() -> Outcome {
    for s in ["1,1;", "1,2;", "1,1,2;", "1,2,3;"] {
        let r = serre_duality_check(&seq(s), -12..=12).map_err(|e| format!("{s}: {e}"))?;
        if !r.verdict {
            return Err(format!("{s}: {:?}", r.mismatches.first()));
        }
    }
    Ok("25 twists on 4 spaces".into())
}

fn example51() -> Outcome {
    let s = seq("1,2;1,1,1");
    let r = example51_verify(&s, -3..=3, 6, false).map_err(|e| e.to_string())?;
    if !r.verdict {
        return Err(format!("{:?}", r.children.iter().map(|c| (&c.name, &c.mismatches)).collect::<Vec<_>>()));
    }
    Ok(format!("{} twists", r.compared))
}

fn charts() -> Outcome {
    let atiyah = classify(&seq("1,1;1,1"));
    if atiyah.kind != Kind::Flop || atiyah.name.as_deref() != Some("Atiyah flop") {
        return Err(format!("(1,1;1,1): {atiyah:?}"));
    }
    let francia = classify(&seq("2,1;1,1"));
    if francia.kind != Kind::Flip || francia.name.as_deref() != Some("Francia flip") {
        return Err(format!("(2,1;1,1): {francia:?}"));
    }
    let s = seq("1,2;1,1,1");
    let atlas = atlas_report(&s).map_err(|e| e.to_string())?;
    let singular: Vec<&AtlasEntry> =
        atlas.iter().filter(|e| e.space == Space::Minus && !e.chart.is_trivial()).collect();
    if singular.len() != 1
        || singular[0].normal_form.as_ref().map(|nf| nf.to_string()).as_deref() != Some("1/2(1,1,1,1)")
    {
        return Err(format!("X- singular charts: {:?}", singular.iter().map(|e| &e.rendered).collect::<Vec<_>>()));
    }
    if atlas.iter().any(|e| e.space == Space::Plus && !e.chart.is_trivial()) {
        return Err("X+ is not smooth".into());
    }
    if let Some(e) = atlas.iter().find(|e| e.space == Space::Y && !matches!(e.label.as_str(), "A1" | "smooth")) {
        return Err(format!("Y chart {:?} is {}", e.index, e.label));
    }
    if !atlas.iter().any(|e| e.space == Space::Y && e.label == "A1") {
        return Err("no A1 chart on Y".into());
    }
    for t in ["1,1;1,1", "2,1;1,1", "1,2;1,1,1", "1,5;2,3", "1,2,3;1,5"] {
        let atlas = atlas_report(&seq(t)).map_err(|e| e.to_string())?;
        for e in &atlas {
            if !is_small(&e.chart).map_err(|e| e.to_string())? {
                return Err(format!("{t}: chart {:?} is not small", e.index));
            }
        }
    }
    let y_charts = cover(&s, Space::Y).len();
    Ok(format!("{} charts on (1,2;1,1,1), {y_charts} on Y", atlas.len()))
}

fn five_cases() -> Outcome {
    let (a, b) = (2, 3);
    let target = seq(&format!("1,{a},{b};1,{}", a + b));
    let cases = [
        format!("1,{a},{b};{}", a + b),
        format!("1,{a},{b};1"),
        format!("1,{};{a},{b}", a + b),
        format!("1,{};1,{a}", a + b),
        format!("1,{};1,{b}", a + b),
    ];
    for c in &cases {
        let ext = canonical_extension(&seq(c)).map_err(|e| format!("{c}: {e}"))?;
        if !ext.is_permutation_of(&target) {
            return Err(format!("{c} extends to {ext}"));
        }
    }
    Ok(format!("{} cases", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 resolution degree bounds", Duration::from_secs(60), betti_sweep),
        ("2 pushforward rule vs Cech oracle", Duration::from_secs(120), pushforward),
        ("3 round-trip equivalence", Duration::from_secs(300), equivalence),
        ("4 F(O(k)) = I_k(-k)", Duration::from_secs(10), f_image),
        ("5 Serre duality", Duration::from_secs(30), serre),
        ("6 transformed cotangent example", Duration::from_secs(60), example51),
        ("7 charts and classification", Duration::from_secs(5), charts),
        ("8 five flips, one flop", Duration::from_secs(1), five_cases),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({took:.2?}, budget {budget:?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} ({took:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
