//! Acceptance suite: prints one PASS/FAIL line per criterion.
//!
//! Exits 0 unless `ROMAN_ACCEPTANCE_STRICT=1` is set, in which case any
//! failure makes the process exit 1.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use roman_count::partial::{build_domination_instance, cpsc_count, PartialCountMatrix};
use roman_count::roman::{brute_force_roman_with, BruteForceOptions};
use roman_count::setcover::{
    build_incidence_graph, build_roman_cover_instance, cwsc_count, measure, MeasureWeights,
};
use roman_count::{
    binomial, brute_force_roman, generate, roman_count_via_cover, roman_count_via_partial, Family,
    Graph, Mode, RomanResult,
};

struct Case {
    name: String,
    graph: Graph,
}

fn case(family: Family, n: usize, p: f64, seed: u64) -> Case {
    let name = match family {
        Family::Gnp => format!("gnp(n={n}, p={p}, seed={seed})"),
        _ => format!("{}({n})", family.as_str()),
    };
    Case {
        name,
        graph: generate(family, n, p, Some(seed)).unwrap(),
    }
}

/// Paths, cycles and complete graphs up to 10 vertices plus 210 random
/// graphs on at most 10 vertices.
fn small_corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for n in 1..=10 {
        out.push(case(Family::Path, n, 0.0, 0));
        if n >= 3 {
            out.push(case(Family::Cycle, n, 0.0, 0));
        }
        out.push(case(Family::Complete, n, 0.0, 0));
    }
    for n in 1..=10 {
        for (pi, p) in [0.2, 0.5, 0.8].into_iter().enumerate() {
            for trial in 0..7 {
                out.push(case(Family::Gnp, n, p, (100 * n + 10 * pi + trial) as u64));
            }
        }
    }
    out
}

/// 56 random graphs G(n, 0.25) with 16 ≤ n ≤ 22.
fn large_corpus() -> Vec<Case> {
    (16..=22)
        .flat_map(|n| (0..8).map(move |t| case(Family::Gnp, n, 0.25, (5000 + 100 * n + t) as u64)))
        .collect()
}

fn value(r: &RomanResult) -> (usize, BigUint) {
    (r.gamma_r, r.count.clone())
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn oracle_equivalence(small: &[Case]) -> Outcome {
    let random = small.iter().filter(|c| c.name.starts_with("gnp")).count();
    for c in small {
        let oracle = value(&brute_force_roman(&c.graph).unwrap());
        let others = [
            ("cover", value(&roman_count_via_cover(&c.graph))),
            (
                "partial",
                value(&roman_count_via_partial(&c.graph, Mode::Polyspace)),
            ),
            (
                "partial-memo",
                value(&roman_count_via_partial(&c.graph, Mode::Memo)),
            ),
        ];
        for (alg, v) in others {
            if v != oracle {
                return outcome(
                    false,
                    format!("{}: {alg} gave {v:?}, brute gave {oracle:?}", c.name),
                );
            }
        }
    }
    outcome(
        random >= 200,
        format!(
            "{} graphs ({random} random), brute = cover = partial = partial-memo",
            small.len()
        ),
    )
}

fn fixtures() -> Outcome {
    let complete = |n| generate(Family::Complete, n, 0.0, None).unwrap();
    let cases = [
        ("K1", complete(1), 1, 1u32),
        ("K2", complete(2), 2, 3),
        ("K3", complete(3), 2, 3),
        ("P3", generate(Family::Path, 3, 0.0, None).unwrap(), 2, 1),
        ("C4", generate(Family::Cycle, 4, 0.0, None).unwrap(), 3, 4),
        ("K5", complete(5), 2, 5),
    ];
    for (name, g, gamma, count) in &cases {
        let want = (*gamma, BigUint::from(*count));
        let got = [
            value(&brute_force_roman(g).unwrap()),
            value(&roman_count_via_cover(g)),
            value(&roman_count_via_partial(g, Mode::Polyspace)),
            value(&roman_count_via_partial(g, Mode::Memo)),
        ];
        if let Some(bad) = got.iter().find(|v| **v != want) {
            return outcome(false, format!("{name}: got {bad:?}, expected {want:?}"));
        }
    }
    outcome(
        true,
        "K1 (1,1) K2 (2,3) K3 (2,3) P3 (2,1) C4 (3,4) K5 (2,5) on all four algorithms",
    )
}

fn large_agreement(large: &[Case]) -> Outcome {
    let mut slowest = Duration::ZERO;
    for c in large {
        let start = Instant::now();
        let cover = value(&roman_count_via_cover(&c.graph));
        let partial = value(&roman_count_via_partial(&c.graph, Mode::Polyspace));
        let memo = value(&roman_count_via_partial(&c.graph, Mode::Memo));
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        if cover != partial || partial != memo {
            return outcome(
                false,
                format!(
                    "{}: cover {cover:?}, partial {partial:?}, partial-memo {memo:?}",
                    c.name
                ),
            );
        }
        if elapsed >= Duration::from_secs(60) {
            return outcome(false, format!("{} took {elapsed:?}", c.name));
        }
    }
    outcome(
        large.len() >= 50,
        format!(
            "{} graphs G(n, 0.25), 16 <= n <= 22, cover = partial = partial-memo, slowest {:.1} ms",
            large.len(),
            slowest.as_secs_f64() * 1e3
        ),
    )
}

fn cover_vectors(small: &[Case]) -> Outcome {
    let mut checked = 0;
    for c in small.iter().filter(|c| c.graph.n() <= 6) {
        let n = c.graph.n();
        let inst = build_roman_cover_instance(&c.graph);
        let counts = cwsc_count(&build_incidence_graph(&inst)).counts;

        // Every sub-collection of the 2n sets, bucketed by weight.
        let sets = inst.sets();
        let mut expected = vec![0u64; 3 * n + 1];
        for mask in 0u32..1 << sets.len() {
            let mut covered = 0u32;
            let mut weight = 0;
            for (i, s) in sets.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    weight += s.weight as usize;
                    for &e in &s.members {
                        covered |= 1 << e;
                    }
                }
            }
            if covered.count_ones() as usize == n {
                expected[weight] += 1;
            }
        }
        let expected: Vec<BigUint> = expected.into_iter().map(BigUint::from).collect();
        let total: BigUint = expected.iter().sum();
        let gamma_r = brute_force_roman(&c.graph).unwrap().gamma_r;
        let ok = counts == expected
            && counts.iter().sum::<BigUint>() == total
            && counts[3 * n] == BigUint::from(1u8)
            && counts[..gamma_r].iter().all(|v| *v == BigUint::ZERO)
            && counts[gamma_r] != BigUint::ZERO;
        if !ok {
            return outcome(
                false,
                format!("{}: counts {counts:?}, enumeration {expected:?}", c.name),
            );
        }
        checked += 1;
    }
    outcome(
        true,
        format!("{checked} graphs with n <= 6 match 2^(2n) enumeration; counts[3n] = 1; zero below gamma_R"),
    )
}

fn matrix_ok(p: &PartialCountMatrix, n: usize) -> bool {
    let one = BigUint::from(1u8);
    (0..=n).all(|j| p.row(j).iter().sum::<BigUint>() == binomial(n, j))
        && *p.get(0, 0) == one
        && *p.get(n, n) == one
}

fn partial_matrices(small: &[Case], large: &[Case]) -> Outcome {
    for c in small.iter().chain(large) {
        let ig = build_domination_instance(&c.graph);
        let p = cpsc_count(&ig, Mode::Polyspace);
        if !matrix_ok(&p, c.graph.n()) {
            return outcome(
                false,
                format!("{}: polyspace matrix fails row sums or corners", c.name),
            );
        }
        if cpsc_count(&ig, Mode::Memo) != p {
            return outcome(
                false,
                format!("{}: memo matrix differs from polyspace", c.name),
            );
        }
    }
    outcome(
        true,
        format!(
            "{} graphs up to n = 22: row sums C(n, j), p[0][0] = p[n][n] = 1, memo matrix identical",
            small.len() + large.len()
        ),
    )
}

fn structure(small: &[Case]) -> Outcome {
    let mut total = 0;
    for c in small {
        let report = brute_force_roman_with(&c.graph, &BruteForceOptions::default()).unwrap();
        total += report.structure_violations;
        if report.structure_violations > 0 {
            return outcome(
                false,
                format!("{}: {} violations", c.name, report.structure_violations),
            );
        }
    }
    outcome(
        total == 0,
        format!(
            "{} graphs, every minimum function has no V1-V2 edge and V1 = V \\ N[V2]",
            small.len()
        ),
    )
}

/// Degree weights `v(i)` and `w(i)` for `i = 0..=6` and `i > 6`.
const WEIGHT_TABLE: &str = "\
i\t0\t1\t2\t3\t4\t5\t6\t>6
v(i)\t0\t0\t0.640171\t0.888601\t0.969491\t0.998628\t1.000000\t1.000000
w(i)\t0\t0\t0.815190\t1.218997\t1.362801\t1.402265\t1.402265\t1.402265
";

fn parse_row(label: &str) -> Vec<f64> {
    let line = WEIGHT_TABLE
        .lines()
        .find(|l| l.starts_with(label))
        .expect("row present");
    line.split('\t')
        .skip(1)
        .map(|x| x.parse().expect("numeric cell"))
        .collect()
}

fn measure_bound(small: &[Case], large: &[Case]) -> Outcome {
    let table = MeasureWeights::TABLE;
    if parse_row("v(i)") != table.element || parse_row("w(i)") != table.set {
        return outcome(false, format!("constants differ from the table: {table:?}"));
    }
    let mut worst: f64 = 0.0;
    for c in small.iter().chain(large) {
        let n = c.graph.n() as f64;
        let k = measure(
            &build_incidence_graph(&build_roman_cover_instance(&c.graph)),
            &table,
        );
        worst = worst.max(k / n);
        if k > 2.402265 * n + 1e-6 {
            return outcome(
                false,
                format!("{}: measure {k} exceeds 2.402265 * {n}", c.name),
            );
        }
    }
    outcome(
        true,
        format!(
            "{} graphs, max measure / n = {worst:.6} <= 2.402265; weight table round-trips exactly",
            small.len() + large.len()
        ),
    )
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    }
}

/// Best of `reps` wall-clock runs, in milliseconds.
fn time_ms(reps: usize, mut f: impl FnMut()) -> f64 {
    (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64() * 1e3
        })
        .fold(f64::INFINITY, f64::min)
}

fn performance() -> Outcome {
    // Least-squares fit of ln(median) against n.
    let sizes = [16usize, 18, 20, 22, 24];
    let mut points = Vec::new();
    for &n in &sizes {
        let times: Vec<f64> = (0..5)
            .map(|t| {
                let g = generate(Family::Gnp, n, 0.25, Some((9000 + 100 * n + t) as u64)).unwrap();
                time_ms(3, || {
                    std::hint::black_box(roman_count_via_cover(&g));
                })
            })
            .collect();
        points.push((n as f64, median(times).ln()));
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let slope = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum::<f64>()
        / points.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    let base = slope.exp();

    let (mut poly, mut memo) = (Vec::new(), Vec::new());
    for t in 0..11u64 {
        let g = generate(Family::Gnp, 22, 0.25, Some(7000 + t)).unwrap();
        // Alternate the modes so drift in machine load hits both alike.
        let (mut best_poly, mut best_memo) = (f64::INFINITY, f64::INFINITY);
        for _ in 0..5 {
            best_poly = best_poly.min(time_ms(1, || {
                std::hint::black_box(roman_count_via_partial(&g, Mode::Polyspace));
            }));
            best_memo = best_memo.min(time_ms(1, || {
                std::hint::black_box(roman_count_via_partial(&g, Mode::Memo));
            }));
        }
        poly.push(best_poly);
        memo.push(best_memo);
    }
    let (poly, memo) = (median(poly), median(memo));
    outcome(
        base < 3.0 && memo <= poly,
        format!(
            "cover growth base {base:.3} (< 3.0); n = 22 medians over 11 graphs: partial-memo {memo:.3} ms, partial {poly:.3} ms (memo <= partial)"
        ),
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let small = small_corpus();
    let large = large_corpus();
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "oracle equivalence",
            Box::new(|| oracle_equivalence(&small)),
        ),
        ("fixtures", Box::new(fixtures)),
        (
            "agreement beyond the oracle",
            Box::new(|| large_agreement(&large)),
        ),
        ("cover weight vectors", Box::new(|| cover_vectors(&small))),
        (
            "partial matrices",
            Box::new(|| partial_matrices(&small, &large)),
        ),
        ("minimum function structure", Box::new(|| structure(&small))),
        ("measure bound", Box::new(|| measure_bound(&small, &large))),
        ("performance", Box::new(performance)),
    ];
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} [{}] {name}: {} ({:.1} s)",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        passed += o.pass as usize;
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    let strict = std::env::var("ROMAN_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && passed < criteria.len() {
        std::process::exit(1);
    }
}
