//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nontrans_core::adversary::{
    count_reduced_trees, enumerate_reduced_trees, max_margin_vs, max_min_margin, MarginSolver,
    SubsetSpace,
};
use nontrans_core::patterns::{theorem1_universe, theorem2_universe, Template, Universe};
use nontrans_core::recognizers::{
    builtin, check_correct, format_tree, parse_tree, spine_algorithm, DecisionTree,
};
use nontrans_core::simulation::{expected_wins, simulate, SequenceDistribution};
use nontrans_core::tournament::{
    compare, image_level_wins, pairwise_wins, render_time_table, verify_cycle, Entrant,
    PreferenceOutcome,
};
use nontrans_core::verify::{theorem1_entrants, verify_theorem2, Mode};

type Outcome = (bool, String);
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn abc() -> [DecisionTree; 3] {
    [
        builtin::algorithm_a(),
        builtin::algorithm_b(),
        builtin::algorithm_c(),
    ]
}

fn table_reproduction() -> Outcome {
    let t = render_time_table(&theorem1_entrants(), &theorem1_universe()).unwrap();
    let expected = [
        ["1", "2", "3"],
        ["2", "3", "1"],
        ["3", "1", "2"],
        ["3", "3", "3"],
    ];
    let ok = t.images == ["a0", "a1", "a2", "a3"]
        && t.cells
            .iter()
            .map(|r| r.as_slice())
            .eq(expected.iter().map(|r| &r[..]));
    (ok, format!("rows {:?}", t.cells))
}

fn three_way_cycle() -> Outcome {
    let u = theorem1_universe();
    let [a, b, c] = abc();
    let counts: Vec<(u64, u64)> = [(&a, &b), (&b, &c), (&c, &a)]
        .iter()
        .map(|(x, y)| pairwise_wins(x, y, &u).unwrap())
        .collect();
    let cycle = verify_cycle(&theorem1_entrants(), &u).unwrap().holds;
    let ok = counts.iter().all(|&c| c == (16, 8)) && cycle;
    (ok, format!("A:B, B:C, C:A = {counts:?}, cycle {cycle}"))
}

fn no_dominator() -> Outcome {
    let u = theorem1_universe();
    let mut ok = true;
    let mut detail = Vec::new();
    for (label, target) in ["A", "B", "C"].iter().zip(abc()) {
        let r = max_margin_vs(&target, &u).unwrap();
        let rechecked = compare(&r.witness, &target, &u).unwrap().margin();
        let valid = check_correct(&r.witness, &u).unwrap().is_correct() && r.witness.is_reduced(&u);
        ok &= r.margin == 0 && rechecked == 0 && valid;
        detail.push(format!(
            "{label}: max margin {} by {} (rechecked {rechecked})",
            r.margin,
            format_tree(&r.witness, &u)
        ));
    }
    let class = count_reduced_trees(&u).unwrap();
    let joint = max_min_margin(&abc(), &u).unwrap();
    (
        ok,
        format!(
            "over {class} trees; {}; against all three at once the best worst-case margin is {}",
            detail.join("; "),
            joint.min_margin
        ),
    )
}

fn spine_cycles() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in 3..=5 {
        let r = verify_theorem2(n, Mode::Exact).unwrap();
        let u = theorem2_universe(n).unwrap();
        let spines: Vec<DecisionTree> = (0..n).map(|q| spine_algorithm(n, q).unwrap()).collect();
        let entrants: Vec<Entrant> = spines
            .iter()
            .enumerate()
            .map(|(q, t)| Entrant::new(format!("A{q}"), t.clone()))
            .collect();
        let cycle = verify_cycle(&entrants, &u).unwrap().holds;
        let mut agree = true;
        for p in 0..n {
            for q in 0..n {
                let (f, b) = pairwise_wins(&spines[p], &spines[q], &u).unwrap();
                let (fi, bi) = image_level_wins(n, p, q).unwrap();
                agree &= fi == f.into() && bi == b.into();
            }
        }
        ok &= r.passed && cycle && agree;
        detail.push(format!("n={n} exact {}", r.passed && cycle && agree));
    }
    for n in 6..=10 {
        let r = verify_theorem2(n, Mode::ImageLevel).unwrap();
        ok &= r.passed;
        detail.push(format!("n={n} image-level {}", r.passed));
    }
    let (u1, u3) = (theorem1_universe(), theorem2_universe(3).unwrap());
    let same_universe = u1.patterns() == u3.patterns() && u1.labels() == u3.labels();
    let same_trees = (0..3).map(|q| spine_algorithm(3, q).unwrap()).eq(abc());
    ok &= same_universe && same_trees;
    detail.push(format!(
        "n=3 is the 25-pattern case: {}",
        same_universe && same_trees
    ));
    (ok, detail.join(", "))
}

fn expectation_identity() -> Outcome {
    let u = theorem1_universe();
    let [a, b, _] = abc();
    let dist = SequenceDistribution::uniform(&u);
    let mut ok = true;
    for n in [1u64, 25, 100, 10_000] {
        let e = expected_wins(&a, &b, &u, &dist, n).unwrap();
        let lhs = e * BigRational::from_integer(BigInt::from(25));
        ok &= lhs == BigRational::from_integer(BigInt::from(16 * n));
    }
    (
        ok,
        "E[wins]·25 = 16n for n in 1, 25, 100, 10000".to_string(),
    )
}

fn monte_carlo() -> Outcome {
    let u = theorem1_universe();
    let [a, b, _] = abc();
    let dist = SequenceDistribution::uniform(&u);
    let fractions: Vec<f64> = (1..=30)
        .map(|seed| {
            simulate(&a, &b, &u, &dist, 10_000, 1, seed)
                .unwrap()
                .empirical_win_fraction
        })
        .collect();
    let within = fractions
        .iter()
        .filter(|f| (*f - 0.64).abs() <= 0.0144)
        .count();
    let again = simulate(&a, &b, &u, &dist, 10_000, 1, 7)
        .unwrap()
        .empirical_win_fraction;
    let deterministic = again == fractions[6];
    let worst = fractions
        .iter()
        .map(|f| (f - 0.64).abs())
        .fold(0.0, f64::max);
    (
        within >= 29 && deterministic,
        format!("{within}/30 seeds within 0.0144, worst deviation {worst:.4}, deterministic {deterministic}"),
    )
}

fn random_tree(rng: &mut ChaCha8Rng, depth: u32) -> DecisionTree {
    if depth == 0 || rng.random_bool(0.3) {
        return DecisionTree::leaf(rng.random_range(0..4));
    }
    DecisionTree::test(
        rng.random_range(1..=9),
        random_tree(rng, depth - 1),
        random_tree(rng, depth - 1),
    )
}

fn property_suites() -> Outcome {
    let mut failed = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let cardinality = (0..729).all(|mut v| {
        let text: String = (0..6)
            .map(|_| {
                let c = ['0', '1', 'B'][v % 3];
                v /= 3;
                c
            })
            .collect();
        let t: Template = text.parse().unwrap();
        t.expand().unwrap().len() == 1 << t.wildcard_count()
    });
    if !cardinality {
        failed.push("cardinality");
    }

    let disjoint = [theorem1_universe(), theorem2_universe(4).unwrap()]
        .iter()
        .all(|u| {
            u.patterns().iter().zip(u.labels()).all(|(x, &l)| {
                let owners: Vec<usize> = u
                    .images()
                    .iter()
                    .filter(|img| img.templates.iter().any(|t| t.matches(x)))
                    .map(|img| img.index)
                    .collect();
                owners == [l]
            })
        });
    if !disjoint {
        failed.push("disjointness");
    }

    let u = theorem1_universe();
    let builtins = builtin::NAMES
        .iter()
        .filter(|n| **n != "C-misprinted")
        .all(|n| {
            check_correct(&builtin::by_name(n).unwrap(), &u)
                .unwrap()
                .is_correct()
        });
    if !builtins {
        failed.push("builtins");
    }

    let pool: Vec<DecisionTree> = builtin::NAMES
        .iter()
        .filter(|n| **n != "C-misprinted")
        .map(|n| builtin::by_name(n).unwrap())
        .chain(enumerate_reduced_trees(&u, 40).unwrap().trees)
        .collect();
    let trichotomy = pool.iter().all(|a| {
        pool.iter().all(|b| {
            let ab = compare(a, b, &u).unwrap();
            let ba = compare(b, a, &u).unwrap();
            let expected = PreferenceOutcome::from_counts(&ab.wins_first, &ab.wins_second);
            ab.outcome == expected
                && ba == ab.mirror()
                && ab.wins_first + ab.wins_second + ab.ties == u.len() as u64
        })
    });
    if !trichotomy {
        failed.push("trichotomy");
    }

    let monotone = abc().iter().all(|t| {
        let mut solver = MarginSolver::new(t, &u).unwrap();
        let full = solver.space().full();
        solver.value(full, 0);
        solver
            .memo_entries()
            .into_iter()
            .all(|(s, d, v)| solver.value(s, d + 1) <= v)
    });
    if !monotone {
        failed.push("monotonicity");
    }

    let l1 = Universe::from_text("L=1\na0: 1\na1: 0\n").unwrap();
    let l2 = Universe::from_text("L=2\na0: 1B\na1: 01\na2: 00\n").unwrap();
    let counts = [(&l1, 1usize), (&l2, 2)].iter().all(|(m, want)| {
        let e = enumerate_reduced_trees(m, 100).unwrap();
        e.trees.len() == *want && e.total == (*want).into() && SubsetSpace::new(m).is_ok()
    });
    if !counts {
        failed.push("micro counts");
    }

    let round_trip = (0..1000).all(|_| {
        let t = random_tree(&mut rng, 6);
        let text = format_tree(&t, &u);
        parse_tree(&text, &u).map(|b| b == t).unwrap_or(false)
    });
    if !round_trip {
        failed.push("round trip");
    }

    (
        failed.is_empty(),
        if failed.is_empty() {
            "cardinality, disjointness, builtins, trichotomy, monotonicity, micro counts, round trip".into()
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("time table", Duration::from_secs(1), table_reproduction),
        ("three-way cycle", Duration::from_secs(1), three_way_cycle),
        (
            "no dominator, single target",
            Duration::from_secs(60),
            no_dominator,
        ),
        ("spine cycles", Duration::from_secs(120), spine_cycles),
        (
            "expectation identity",
            Duration::from_secs(10),
            expectation_identity,
        ),
        ("monte carlo", Duration::from_secs(10), monte_carlo),
        ("property suites", Duration::from_secs(60), property_suites),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match panic::catch_unwind(run) {
            Ok(outcome) => outcome,
            Err(_) => (false, "panicked".to_string()),
        };
        let elapsed = start.elapsed();
        let on_time = elapsed <= *budget;
        let pass = ok && on_time;
        failures += usize::from(!pass);
        println!(
            "{} {}. {name}: {detail} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
