//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::ExitCode;
use std::time::Instant;

use hwl_core::bound::{count_identities, lower_bound_report, random_sweep};
use hwl_core::cube::{theta_opt, VertexSet};
use hwl_core::embed::{
    gray_cycle_wirelength, gray_embedding, gray_type_formula, partition_path, type_sequence,
    type_sequence_of, wirelength, wirelength_by_cuts, Embedding, Host,
};
use hwl_core::oracle::{
    brute_min_cycle_wl, compute_five_cube_table, scan_all, KtTable, ScanConfig, Symmetry,
};
use hwl_core::takagi::{lemma_suite_takagi, verify_certificate_grids};
use hwl_core::{Rational, Scalar};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Edge boundary by walking every vertex and neighbour, no bit tricks.
fn boundary_by_edges(n: u32, members: &[bool]) -> u64 {
    let mut count = 0;
    for v in 0..members.len() {
        for p in 0..n {
            let w = v ^ (1 << p);
            if members[v] && !members[w] {
                count += 1;
            }
        }
    }
    count
}

fn gray_wirelength() -> Outcome {
    for n in 2..=12u32 {
        let xi = gray_embedding(n).map_err(|e| e.to_string())?;
        let formula = 3 * (1u64 << (2 * n - 3)) - (1u64 << (n - 1));
        let wl = wirelength(&xi, Host::Cycle).map_err(|e| e.to_string())?;
        let cuts = wirelength_by_cuts(&xi, Host::Cycle).map_err(|e| e.to_string())?;
        ensure(wl == formula && cuts == formula, || {
            format!("n={n}: {wl}/{cuts} vs {formula}")
        })?;
    }
    Ok("n=2..12 exact".into())
}

fn exhaustive_minimum() -> Outcome {
    let (w2, _) = brute_min_cycle_wl(2).map_err(|e| e.to_string())?;
    let (w3, witness) = brute_min_cycle_wl(3).map_err(|e| e.to_string())?;
    ensure(w2 == 4 && w3 == 20, || format!("minima {w2}, {w3}"))?;
    let again = wirelength(&witness, Host::Cycle).map_err(|e| e.to_string())?;
    ensure(again == 20, || format!("witness has wirelength {again}"))?;
    Ok("n=2 -> 4, n=3 -> 20".into())
}

const PRINTED_CELLS: [(u64, u64, u64); 16] = [
    (10, 5, 30),
    (11, 5, 31),
    (12, 5, 32),
    (13, 5, 31),
    (14, 5, 30),
    (15, 5, 29),
    (16, 5, 26),
    (12, 6, 32),
    (13, 6, 33),
    (14, 6, 32),
    (15, 6, 33),
    (16, 6, 30),
    (14, 7, 34),
    (15, 7, 33),
    (16, 7, 34),
    (16, 8, 32),
];

fn table_one(scans: &[KtTable]) -> Outcome {
    let table = hwl_core::oracle::five_cube_table_from_scans(scans).map_err(|e| e.to_string())?;
    for &(k, t, want) in &PRINTED_CELLS {
        let got = table.get(k, t).map(|c| c.theta);
        ensure(got == Some(want), || {
            format!("(k={k}, t={t}): {got:?} vs {want}")
        })?;
    }
    ensure(table.cells.len() == PRINTED_CELLS.len(), || {
        format!("{} cells", table.cells.len())
    })?;
    for c in &table.cells {
        // 32 f(k/32) = 24 - (2/7)(k - 16)^2
        let d = c.k as i64 - 16;
        let bound = Rational::from_int(24) - Rational::ratio(2 * d * d, 7);
        ensure(c.bound == bound, || {
            format!("k={}: bound {} vs {bound}", c.k, c.bound)
        })?;
        ensure(Rational::from_int(c.theta as i64) >= bound, || {
            format!("(k={}, t={}) below bound", c.k, c.t)
        })?;
    }
    let report = table.verify();
    ensure(report.passed(), || report.to_string())?;
    Ok(format!(
        "{} printed cells and 7 footer values",
        PRINTED_CELLS.len()
    ))
}

/// Integer re-run of both grid regions: values scaled by `7·2^24`.
fn grid_oracle() -> (Rational, (u64, u64), Rational, (u64, u64)) {
    let s: i128 = 1 << 12;
    let mut theta = vec![0i128; s as usize + 1];
    let mut inside = 0i128;
    for k in 0..=s {
        theta[k as usize] = 12 * k - 2 * inside;
        inside += (k as u64).count_ones() as i128;
    }
    let a = |i: i128, j: i128| 7 * s * (theta[j as usize] + theta[(i - j) as usize] - 2 * j);
    let f = |i: i128| 7 * s * s * 3 / 4 - 64 * (i - s / 2) * (i - s / 2);
    let scale = 7 * s * s;
    let mut main = (i128::MAX, (0, 0));
    for i in 819..=2048 {
        let rhs = f(i).max(f(i + 1));
        for j in 171..=619 {
            let g = a(i, j) - rhs;
            if g < main.0 {
                main = (g, (i as u64, j as u64));
            }
        }
    }
    let mut strict = (i128::MAX, (0, 0));
    for i in 819..=1963 {
        let g = a(i, 170) - f(i + 1);
        if g < strict.0 {
            strict = (g, (i as u64, 170));
        }
    }
    let r = |v: i128| Rational::new(v.into(), scale.into());
    (r(main.0), main.1, r(strict.0), strict.1)
}

fn certificate_grids() -> Outcome {
    let (main, strict) = verify_certificate_grids().map_err(|e| e.to_string())?;
    ensure(main.min_gap.is_zero() && main.pass, || {
        format!("main region gap {}", main.min_gap)
    })?;
    ensure(strict.min_gap.is_positive() && strict.pass, || {
        format!("strict row gap {}", strict.min_gap)
    })?;
    let decimal = strict.min_gap_f64();
    ensure((decimal - 0.003).abs() <= 0.0005, || {
        format!("strict gap {decimal} not within 0.0005 of 0.003")
    })?;
    let (o_main, o_main_at, o_strict, o_strict_at) = grid_oracle();
    ensure(o_main == main.min_gap && o_main_at == main.argmin, || {
        format!(
            "oracle main {o_main} at {o_main_at:?} vs {} at {:?}",
            main.min_gap, main.argmin
        )
    })?;
    ensure(
        o_strict == strict.min_gap && o_strict_at == strict.argmin,
        || {
            format!(
                "oracle strict {o_strict} at {o_strict_at:?} vs {} at {:?}",
                strict.min_gap, strict.argmin
            )
        },
    )?;
    ensure(strict.min_gap == Rational::ratio(6329, 1835008), || {
        format!("strict gap {}", strict.min_gap)
    })?;
    Ok(format!(
        "main gap 0 at {:?}; strict gap {} ≈ {decimal:.6} at {:?}",
        main.argmin, strict.min_gap, strict.argmin
    ))
}

fn lemma_suite() -> Outcome {
    let counts = count_identities(12).map_err(|e| e.to_string())?;
    ensure(counts.passed(), || counts.to_string())?;
    let suite = lemma_suite_takagi(40).map_err(|e| e.to_string())?;
    ensure(suite.passed(), || suite.to_string())?;
    let instances: u64 = counts
        .checks
        .iter()
        .chain(&suite.checks)
        .map(|c| c.instances)
        .sum();
    Ok(format!(
        "{} checks, {instances} instances",
        counts.checks.len() + suite.checks.len()
    ))
}

fn oracle_equivalence(scans5: &[KtTable]) -> Outcome {
    let cfg = ScanConfig::new(1, Symmetry::Complement).map_err(|e| e.to_string())?;
    for n in 1..=4 {
        for s in scan_all(n, &cfg).map_err(|e| e.to_string())? {
            let closed = theta_opt(n, s.k).unwrap();
            ensure(s.min() == closed, || {
                format!("n={n} k={}: {} vs {closed}", s.k, s.min())
            })?;
        }
    }
    for s in scans5 {
        let closed = theta_opt(5, s.k).unwrap();
        ensure(s.min() == closed, || {
            format!("n=5 k={}: {} vs {closed}", s.k, s.min())
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for trial in 0..10_000 {
        let n = rng.gen_range(1..=6u32);
        let members: Vec<bool> = (0..1usize << n).map(|_| rng.gen_bool(0.5)).collect();
        let s = VertexSet::from_vertices(
            n,
            (0..members.len() as u32).filter(|&v| members[v as usize]),
        )
        .unwrap();
        let direct = boundary_by_edges(n, &members);
        ensure(s.boundary_size_multicut() == direct, || {
            format!("trial {trial}: multicut")
        })?;
        ensure(s.boundary_size() == direct, || {
            format!("trial {trial}: boundary")
        })?;
        if n >= 2 {
            for axis in 1..=n {
                let (s0, s1) = s.split_by_axis(axis).unwrap();
                let rhs =
                    s0.boundary_size() + s1.boundary_size() + s0.symmetric_difference_len(&s1);
                ensure(rhs == direct, || {
                    format!("trial {trial}: axis {axis} split {rhs} vs {direct}")
                })?;
            }
        }
    }
    Ok("n<=4 all k, n=5 k=10..16, 10^4 random subsets".into())
}

fn pipeline_property() -> Outcome {
    for (n, floor) in [(5u32, 368u64), (6, 1504)] {
        let sweep = random_sweep(n, 10_000, 2024 + n as u64).map_err(|e| e.to_string())?;
        ensure(sweep.failures.is_empty(), || {
            format!("n={n}: failing verdicts {:?}", sweep.failures)
        })?;
        ensure(sweep.type_sequence_failures.is_empty(), || {
            format!("n={n}: type sequences {:?}", sweep.type_sequence_failures)
        })?;
        ensure(
            sweep.min_wirelength >= floor && sweep.gray_total == floor,
            || format!("n={n}: min WL {} vs {floor}", sweep.min_wirelength),
        )?;
    }
    for n in 5..=10 {
        let r = lower_bound_report(&gray_embedding(n).unwrap()).map_err(|e| e.to_string())?;
        let g = gray_cycle_wirelength(n);
        let s = &r.sums;
        ensure(
            r.verdict && [s.windows, s.t, s.t1, s.t2, s.t3, s.t4, s.s] == [g; 7],
            || format!("n={n}: Gray sums {s:?}"),
        )?;
        let types = type_sequence(&partition_path(&gray_embedding(n).unwrap()));
        ensure(types.check_continuity_and_peaks().passed, || {
            format!("n={n}: Gray type sequence")
        })?;
    }
    let sample = type_sequence_of(&Embedding::sample()).unwrap();
    ensure(sample.check_continuity_and_peaks().passed, || {
        "sample type sequence".into()
    })?;
    Ok("2x10^4 random embeddings, Gray fixed point n=5..10".into())
}

fn figure_data() -> Outcome {
    let r = lower_bound_report(&Embedding::sample()).map_err(|e| e.to_string())?;
    let s = &r.sums;
    ensure(r.verdict, || r.checks.to_string())?;
    ensure(
        s.windows >= s.t
            && s.t >= s.t1
            && s.t2 == s.t1
            && s.t3 == s.t2
            && s.t4 <= s.t3
            && s.s <= s.t4,
        || format!("sums {s:?}"),
    )?;
    ensure(s.s == 1504, || format!("final sum {}", s.s))?;
    let mut csv = Vec::new();
    r.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    let mut lines = text.lines();
    ensure(lines.next() == Some("i,t,t1,t2,t3,t4,s"), || {
        "csv header".into()
    })?;
    let rows: Vec<Vec<u64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    ensure(
        rows.len() == 32 && rows.iter().all(|r| r.len() == 7),
        || "csv shape".into(),
    )?;
    let t6 = type_sequence_of(&gray_embedding(6).unwrap()).unwrap();
    // 0,1,...,8,...,0,...,8,...,1
    let expected: Vec<u64> = (0..32i64)
        .map(|j| (8 - (j % 16 - 8).abs()) as u64)
        .collect();
    ensure(
        t6.values() == expected.as_slice() && expected == gray_type_formula(6),
        || format!("Gray n=6 types {:?}", t6.values()),
    )?;
    Ok(format!(
        "sample sums {} >= {} >= {} = {} = {} >= {} >= {}",
        s.windows, s.t, s.t1, s.t2, s.t3, s.t4, s.s
    ))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cfg = ScanConfig::new(1, Symmetry::Complement).unwrap();
    let scans5: Result<Vec<KtTable>, String> = compute_five_cube_table(&cfg)
        .map(|(_, scans)| scans)
        .map_err(|e| e.to_string());
    let scan_secs = started.elapsed().as_secs_f64();

    let criteria: Vec<Criterion> = vec![
        ("1 gray cycle wirelength formula", Box::new(gray_wirelength)),
        ("2 exhaustive minimality n<=3", Box::new(exhaustive_minimum)),
        (
            "3 n=5 table reproduction",
            Box::new(|| table_one(scans5.as_ref().map_err(Clone::clone)?)),
        ),
        ("4 exact grid regions", Box::new(certificate_grids)),
        ("5 lemma suite", Box::new(lemma_suite)),
        (
            "6 oracle equivalence",
            Box::new(|| oracle_equivalence(scans5.as_ref().map_err(Clone::clone)?)),
        ),
        ("7 lower-bound chain property", Box::new(pipeline_property)),
        ("8 figure data", Box::new(figure_data)),
    ];
    println!("n=5 scans (k=10..16, one worker): {scan_secs:.1}s");
    let mut failed = 0;
    for (name, run) in criteria {
        let t0 = Instant::now();
        let outcome = run();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}  [{secs:.1}s]  {detail}"),
            Err(witness) => {
                failed += 1;
                println!("FAIL  {name}  [{secs:.1}s]  {witness}");
            }
        }
    }
    println!(
        "acceptance: {} failed, total {:.1}s",
        failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
