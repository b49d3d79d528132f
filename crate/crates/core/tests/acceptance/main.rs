//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//! The criteria serialize on a shared lock; the soundness aggregate (8)
//! reuses the statistics gathered by 1–7.

mod support;

use std::time::Instant;

use peekac::ac::Template;
use peekac::hom::find_homomorphism;
use peekac::limits::Limits;
use peekac::meta::{
    ac_solvability_check, empirical_pac_decides, for_each_canonical_instance,
    pac_characterization_check, InstanceBound,
};
use peekac::pac::{pac_decide, pacc_holds, PacOptions};
use peekac::structure::{Signature, Structure};
use peekac::templates::{k2_template, two_sat_template};

use support::*;

/// Criterion 1: peek decision equals brute-force satisfiability on all
/// canonical 2-CNFs (<= 4 variables, <= 8 clauses) and 1000 seeded random
/// instances (<= 15 variables). Tolerance: 0 disagreements.
#[test]
fn criterion_1_twosat_oracle_agreement() {
    let _g = criterion_guard();
    let start = Instant::now();
    let exhaustive = twosat_exhaustive_stats();
    let random = twosat_random_stats();
    let passed = exhaustive.disagreements == 0 && random.disagreements == 0;
    announce(
        "1 (2-SAT oracle agreement)",
        passed,
        &format!(
            "{}; {}; {} disagreements; {:.1}s",
            exhaustive.detail,
            random.detail,
            exhaustive.disagreements + random.disagreements,
            elapsed_secs(start)
        ),
    );
    assert_eq!(exhaustive.disagreements, 0, "exhaustive 2-CNF disagreements");
    assert_eq!(random.disagreements, 0, "random 2-CNF disagreements");
}

/// Criterion 2: peek acceptance against K2 equals bipartiteness on every
/// labeled graph with <= 6 vertices. Tolerance: 0 disagreements.
#[test]
fn criterion_2_k2_bipartite_oracle_agreement() {
    let _g = criterion_guard();
    let start = Instant::now();
    let stats = k2_exhaustive_stats();
    announce(
        "2 (K2/bipartiteness)",
        stats.disagreements == 0,
        &format!(
            "{}; {} disagreements; {:.1}s",
            stats.detail,
            stats.disagreements,
            elapsed_secs(start)
        ),
    );
    assert_eq!(stats.disagreements, 0);
}

/// Criterion 3: descriptor peek decision equals the
/// condensation oracle on every ordered 3-variable network and 1000 random
/// 50-variable networks. Tolerance: 0 disagreements.
#[test]
fn criterion_3_point_algebra_oracle_agreement() {
    let _g = criterion_guard();
    let start = Instant::now();
    let exhaustive = pointalg_exhaustive_stats();
    let random = pointalg_random_stats();
    let passed = exhaustive.disagreements == 0 && random.disagreements == 0;
    announce(
        "3 (point algebra)",
        passed,
        &format!(
            "{}; {}; {} disagreements; {:.1}s",
            exhaustive.detail,
            random.detail,
            exhaustive.disagreements + random.disagreements,
            elapsed_secs(start)
        ),
    );
    assert_eq!(exhaustive.disagreements, 0, "exhaustive point-algebra disagreements");
    assert_eq!(random.disagreements, 0, "random point-algebra disagreements");
}

/// Criterion 4: the pattern test equals small-model brute force (universe
/// 2^vars) on every constraint subset over 3 variables. Tolerance: 0.
#[test]
fn criterion_4_set_constraint_oracle_agreement() {
    let _g = criterion_guard();
    let start = Instant::now();
    let stats = setcon_exhaustive_stats();
    announce(
        "4 (set constraints)",
        stats.disagreements == 0,
        &format!(
            "{}; {} disagreements; {:.1}s",
            stats.detail,
            stats.disagreements,
            elapsed_secs(start)
        ),
    );
    assert_eq!(stats.disagreements, 0);
}

/// Criterion 5: over all 16 two-element single-binary-relation templates,
/// the power-structure criterion equals empirically measured
/// "propagation-accept implies homomorphism" on exhaustive small instances.
#[test]
fn criterion_5_ac_characterization() {
    let _g = criterion_guard();
    let start = Instant::now();
    let stats = ac_characterization_stats();
    announce(
        "5 (AC characterization)",
        stats.disagreements == 0,
        &format!(
            "{}; {} disagreements; {:.1}s",
            stats.detail,
            stats.disagreements,
            elapsed_secs(start)
        ),
    );
    assert_eq!(stats.disagreements, 0);
}

fn ac_characterization_stats() -> &'static Stats {
    use std::sync::OnceLock;
    static STATS: OnceLock<Stats> = OnceLock::new();
    STATS.get_or_init(|| {
        let limits = Limits::default();
        let sig = Signature::new(vec![("R", 2)]).expect("static");
        let mut disagreements = 0u64;
        let mut soundness = 0u64;
        let mut instances = 0u64;
        for mask in 0u32..16 {
            let tuples: Vec<Vec<usize>> = (0..4)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vec![i / 2, i % 2])
                .collect();
            let b = Structure::new(sig.clone(), 2, vec![("R", tuples)]).expect("in range");
            let algebraic = ac_solvability_check(&b, &limits).expect("within caps");
            let mut empirical = true;
            for_each_canonical_instance(&sig, InstanceBound::new(3, 4), |a| {
                instances += 1;
                let acc = ac_decision(a, Template::Finite(&b));
                let hom = find_homomorphism(a, &b, &limits)?.is_found();
                if acc && !hom {
                    empirical = false;
                }
                // peek soundness feeds the aggregate criterion
                let accepted = pacc_holds(a, Template::Finite(&b), &limits)?;
                if !accepted && hom {
                    soundness += 1;
                }
                Ok(true)
            })
            .expect("engine");
            if algebraic != empirical {
                disagreements += 1;
            }
        }
        Stats {
            instances,
            disagreements,
            soundness_violations: soundness,
            detail: format!("16 templates x {} instance checks", instances / 16),
        }
    })
}

/// Criterion 6: the peek powers of K2 and the 2-SAT structure map back to
/// their templates for n in 1..=3; the parity template fails by n <= 3 and
/// the extensional check produces a counterexample that re-verifies.
#[test]
fn criterion_6_pac_characterization() {
    let _g = criterion_guard();
    let start = Instant::now();
    let limits = Limits::default();

    let k2 = k2_template();
    let k2_holds = pac_characterization_check(&k2, 3, &limits).expect("within caps");
    let twosat = two_sat_template();
    let twosat_holds = pac_characterization_check(&twosat, 3, &limits).expect("within caps");
    let positive_ok = k2_holds == vec![(1, true), (2, true), (3, true)]
        && twosat_holds == vec![(1, true), (2, true), (3, true)];

    let parity = parity_template();
    let parity_holds = pac_characterization_check(&parity, 3, &limits).expect("within caps");
    let (_, failing) = *parity_holds.last().expect("nonempty");
    let failing_n = parity_holds.last().expect("nonempty").0;
    let negative_ok = !failing && failing_n <= 3;

    let (decides, counterexample) =
        empirical_pac_decides(&parity, InstanceBound::new(5, 4), &limits).expect("within caps");
    let cx_ok = if let Some(cx) = &counterexample {
        !decides
            && pacc_holds(cx, Template::Finite(&parity), &limits).expect("engine")
            && !find_homomorphism(cx, &parity, &limits).expect("engine").is_found()
    } else {
        false
    };

    let passed = positive_ok && negative_ok && cx_ok;
    announce(
        "6 (PAC characterization)",
        passed,
        &format!(
            "peek powers map back for K2 and 2-SAT at n=1..3; parity fails at n={failing_n}; \
             counterexample with {} variables re-verifies; {:.1}s",
            counterexample.as_ref().map_or(0, |c| c.size()),
            elapsed_secs(start)
        ),
    );
    assert!(positive_ok, "K2: {k2_holds:?}, 2-SAT: {twosat_holds:?}");
    assert!(negative_ok, "parity characterization: {parity_holds:?}");
    assert!(cx_ok, "counterexample must re-verify: {counterexample:?}");
}

/// Criterion 7: ten seeded pp-expansions of K2 and three bipartite graphs
/// homomorphically equivalent to K2 all keep the peek loop complete at the
/// default bound. Tolerance: 0 violations.
#[test]
fn criterion_7_robustness() {
    let _g = criterion_guard();
    let start = Instant::now();
    let stats = robustness_stats();
    let violations: u64 = stats.per_template.iter().map(|(_, s)| s.disagreements).sum();
    // also exercise the library entry point on one expansion
    let k2 = k2_template();
    let mut rng = peekac::gen::rng_from_seed(7001);
    let phi = peekac::gen::gen_pp_formula(k2.signature(), 3, 3, &mut rng);
    let expanded = peekac::meta::pp_expand(&k2, &[("T".to_string(), phi)]).expect("fresh name");
    let (decides, cx) =
        empirical_pac_decides(&expanded, InstanceBound::default(), &Limits::default())
            .expect("within caps");
    let passed = violations == 0 && decides;
    announce(
        "7 (robustness)",
        passed,
        &format!(
            "{} templates ({} pp-expansions + 3 bipartite graphs); {} violations; {:.1}s",
            stats.per_template.len(),
            stats.per_template.len() - 3,
            violations,
            elapsed_secs(start)
        ),
    );
    for (name, s) in &stats.per_template {
        assert_eq!(s.disagreements, 0, "template {name} lost completeness");
    }
    assert!(decides, "library check must agree, counterexample: {cx:?}");
}

/// Criterion 8: across every instance generated by criteria 1..=7, a peek
/// rejection never co-occurs with oracle satisfiability.
#[test]
fn criterion_8_soundness_aggregate() {
    let _g = criterion_guard();
    let start = Instant::now();
    let sources: Vec<(&str, &Stats)> = vec![
        ("2sat exhaustive", twosat_exhaustive_stats()),
        ("2sat random", twosat_random_stats()),
        ("k2 graphs", k2_exhaustive_stats()),
        ("pointalg exhaustive", pointalg_exhaustive_stats()),
        ("pointalg random", pointalg_random_stats()),
        ("set constraints", setcon_exhaustive_stats()),
        ("ac characterization", ac_characterization_stats()),
        ("parity sweep", parity_sweep_stats()),
    ];
    let robustness = robustness_stats();
    let mut total_instances: u64 = sources.iter().map(|(_, s)| s.instances).sum();
    let mut violations: u64 = sources.iter().map(|(_, s)| s.soundness_violations).sum();
    for (_, s) in &robustness.per_template {
        total_instances += s.instances;
        violations += s.soundness_violations;
    }
    announce(
        "8 (soundness aggregate)",
        violations == 0,
        &format!(
            "{total_instances} instances across criteria 1-7; {violations} unsound rejections; {:.1}s",
            elapsed_secs(start)
        ),
    );
    assert_eq!(violations, 0);
}

/// Criterion 9: reports are byte-identical for 1, 2, and 8 workers on 100
/// seeded instances; point-algebra scaling shows a per-doubling time ratio
/// <= 6 and a >= 1.8x speedup with 4 workers at size 400.
#[test]
fn criterion_9_determinism_and_scaling() {
    let _g = criterion_guard();
    let start = Instant::now();
    let limits = Limits::default();
    let pa = peekac::descriptor::PointAlgebra::new();
    let k2 = k2_template();
    let twosat = two_sat_template();

    let mut checked = 0;
    for case in determinism_cases() {
        let (instance, template) = match &case {
            DeterminismCase::PointAlgebra(a) => (a, Template::Descriptor(&pa)),
            DeterminismCase::Graph(g) => (g, Template::Finite(&k2)),
            DeterminismCase::Cnf(c) => (c, Template::Finite(&twosat)),
        };
        let options = PacOptions::default();
        let base = pac_decide(instance, template, 1, &options, &limits).expect("engine");
        let base_lines = base.render_lines(instance);
        for workers in [2usize, 8] {
            let other = pac_decide(instance, template, workers, &options, &limits)
                .expect("engine");
            assert_eq!(base, other, "report structure differs at {workers} workers");
            assert_eq!(
                base_lines,
                other.render_lines(instance),
                "rendered report differs at {workers} workers"
            );
        }
        checked += 1;
    }

    // scaling on point-algebra networks
    let sizes = [100usize, 200, 400];
    let instances: Vec<Structure> = sizes
        .iter()
        .map(|&n| peekac::gen::gen_point_algebra(n, 2.0, 0.5, 80_000 + n as u64))
        .collect();
    let t: Vec<f64> = instances
        .iter()
        .map(|a| time_pac(a, Template::Descriptor(&pa), 1, 5))
        .collect();
    let ratio_1 = t[1] / t[0].max(1e-9);
    let ratio_2 = t[2] / t[1].max(1e-9);
    let t400_w4 = time_pac(&instances[2], Template::Descriptor(&pa), 4, 5);
    let speedup = t[2] / t400_w4.max(1e-9);

    let passed = checked == 100 && ratio_1 <= 6.0 && ratio_2 <= 6.0 && speedup >= 1.8;
    announce(
        "9 (determinism and scaling)",
        passed,
        &format!(
            "100 instances byte-identical at 1/2/8 workers; times {:.1}/{:.1}/{:.1} ms, \
             doubling ratios {ratio_1:.2} and {ratio_2:.2} (<= 6); 4-worker speedup {speedup:.2} \
             (>= 1.8); {:.1}s",
            t[0] * 1e3,
            t[1] * 1e3,
            t[2] * 1e3,
            elapsed_secs(start)
        ),
    );
    assert_eq!(checked, 100);
    assert!(ratio_1 <= 6.0, "doubling 100->200 ratio {ratio_1:.2}");
    assert!(ratio_2 <= 6.0, "doubling 200->400 ratio {ratio_2:.2}");
    assert!(speedup >= 1.8, "4-worker speedup {speedup:.2}");
}
