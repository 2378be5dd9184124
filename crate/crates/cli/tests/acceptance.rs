//! Acceptance criteria. Runs as a plain binary and prints one PASS/FAIL line
//! per criterion; exits nonzero if any criterion fails.

use std::path::Path;
use std::time::{Duration, Instant};

use rrldp::analytics::{
    classify_regime, epsilon_of, min_variance_at_epsilon, params_from_epsilon,
    variance_ratio_ic_mc, variance_theoretical, DesignAux, Family, PrivacyBudget,
};
use rrldp::io::{read_csv_report, RunManifest};
use rrldp::mechanisms::{
    CardDistribution, Deck, MechanismKind, MechanismSpec, Population, SimmonsParams, WarnerParams,
};
use rrldp::simulation::{exact_oracle, monte_carlo, SimConfig, SimulationReport};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        id: 1,
        name: "sample sizes at pi_A = 0.1, var = 0.1, p2 = 0.01",
        limit: Some(Duration::from_secs(1)),
        check: sample_sizes,
    },
    Criterion {
        id: 2,
        name: "regime interval lengths at N = 10^4",
        limit: Some(Duration::from_secs(1)),
        check: interval_lengths,
    },
    Criterion {
        id: 3,
        name: "IC/MC variance ratio at pi_A = 0.0778",
        limit: Some(Duration::from_secs(120)),
        check: ratio,
    },
    Criterion {
        id: 4,
        name: "exact enumeration against closed forms, N = 2..6",
        limit: Some(Duration::from_secs(30)),
        check: oracle_exactness,
    },
    Criterion {
        id: 5,
        name: "Monte Carlo variance against budget, N = 100",
        limit: Some(Duration::from_secs(60)),
        check: variance_curve,
    },
    Criterion {
        id: 6,
        name: "variance ordering on the N = 9 deck",
        limit: Some(Duration::from_secs(120)),
        check: small_deck_ordering,
    },
    Criterion {
        id: 7,
        name: "budget round trip and reductions to Warner",
        limit: Some(Duration::from_secs(1)),
        check: reductions,
    },
    Criterion {
        id: 8,
        name: "simulate output is byte-identical on replay",
        limit: None,
        check: determinism,
    },
];

fn main() {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!(
                "took {:.2}s, limit {}s",
                elapsed.as_secs_f64(),
                limit.as_secs()
            )),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} criterion {}: {} [{:.2}s] {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        CRITERIA.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rrldp").chain(args.iter().copied());
    let status = rrldp_cli::run(argv, &mut out, &mut err);
    if status != 0 {
        return Err(format!(
            "`rrldp {}` exited {status}: {}",
            args.join(" "),
            String::from_utf8_lossy(&err).trim()
        ));
    }
    String::from_utf8(out).map_err(|e| e.to_string())
}

fn field(text: &str, key: &str) -> Result<f64, String> {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .ok_or_else(|| format!("no {key} in output {text:?}"))?
        .trim()
        .parse()
        .map_err(|e| format!("{key}: {e}"))
}

fn budget(eps: f64) -> PrivacyBudget {
    PrivacyBudget::new(eps).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sample_sizes() -> Outcome {
    let epsilons = ["0.01", "0.05", "0.25", "0.5"];
    // mechanism, expected sizes, absolute tolerance per cell
    type Row = (&'static str, [f64; 4], fn(f64) -> f64);
    let table: [Row; 4] = [
        ("warner", [100000.0, 4000.0, 160.0, 40.0], |_| 2.0),
        ("simmons", [100000.0, 4000.0, 160.0, 40.0], |_| 2.0),
        (
            "improved-christofides",
            [36365.0, 1456.0, 59.0, 16.0],
            |_| 2.0,
        ),
        ("christofides", [101011.0, 4040.0, 161.0, 40.0], |v| {
            1e-4 * v
        }),
    ];
    let mut got = Vec::new();
    for (mechanism, expected, tol) in table {
        let mut row = Vec::new();
        for (eps, want) in epsilons.iter().zip(expected) {
            let out = cli(&[
                "sample-size",
                "--mechanism",
                mechanism,
                "--epsilon",
                eps,
                "--pi-a",
                "0.1",
                "--p2",
                "0.01",
                "--var",
                "0.1",
            ])?;
            let n: f64 = out.trim().parse().map_err(|e| format!("{out:?}: {e}"))?;
            ensure((n - want).abs() <= tol(want), || {
                format!("{mechanism} at eps {eps}: got {n}, expected {want}")
            })?;
            row.push(n.to_string());
        }
        got.push(format!("{mechanism} {}", row.join("/")));
    }
    Ok(got.join("; "))
}

fn interval_lengths() -> Outcome {
    let epsilons = ["0.01", "0.05", "0.25", "0.5"];
    let table = [
        ("0.01", [0.100, 0.101, 0.101, 0.104]),
        ("0.05", [0.224, 0.224, 0.225, 0.230]),
    ];
    let mut got = Vec::new();
    for (p2, expected) in table {
        for (eps, want) in epsilons.iter().zip(expected) {
            let out = cli(&["compare", "--n", "10000", "--epsilon", eps, "--p2", p2])?;
            let len = field(&out, "length")?;
            ensure((len - want).abs() <= 0.001, || {
                format!("p2 {p2} eps {eps}: length {len}, expected {want}")
            })?;
            got.push(format!("{len:.3}"));
        }
    }
    Ok(format!("lengths {}", got.join("/")))
}

fn ratio() -> Outcome {
    let r = variance_ratio_ic_mc(3_252_599, 0.0778).map_err(|e| e.to_string())?;
    ensure((r - 0.287).abs() <= 0.0005, || format!("ratio {r}"))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = dir.path().join("hcovany.csv");
    let data = data.to_str().unwrap();
    cli(&[
        "synth", "--n", "100000", "--pi-a", "0.0778", "--seed", "2024", "--out", data,
    ])?;
    let ingest = cli(&["ingest", data])?;
    let pi = field(&ingest, "pi_A")?;
    ensure((pi - 0.0778).abs() < 1e-12, || {
        format!("ingested pi_A {pi}")
    })?;
    let csv = cli(&[
        "simulate",
        "--data",
        data,
        "--mechanism",
        "christofides,improved-christofides",
        "--epsilon",
        "0.25",
        "--p2",
        "0.01",
        "--reps",
        "10000",
        "--seed",
        "17",
    ])?;
    let report = read_csv_report(csv.as_bytes()).map_err(|e| e.to_string())?;
    let var = |k| {
        report
            .find(k, 0)
            .and_then(|r| r.var_empirical)
            .ok_or_else(|| format!("no {k} row"))
    };
    let empirical = var(MechanismKind::ImprovedChristofides)? / var(MechanismKind::Christofides)?;
    ensure((empirical / 0.287 - 1.0).abs() <= 0.15, || {
        format!("empirical ratio {empirical}")
    })?;
    Ok(format!("closed form {r:.5}, empirical {empirical:.4}"))
}

fn oracle_exactness() -> Outcome {
    let mut specs: Vec<MechanismSpec> = Vec::new();
    for p in [0.1, 0.25, 0.45] {
        specs.push(MechanismSpec::Warner(WarnerParams::new(p).unwrap()));
    }
    for (p, pi_b) in [(0.2, 0.5), (0.5, 0.1), (0.7, 0.8)] {
        specs.push(MechanismSpec::Simmons(SimmonsParams::new(p, pi_b).unwrap()));
    }
    for d in [
        vec![0.2, 0.3, 0.5],
        vec![0.5, 0.1, 0.1, 0.3],
        vec![0.7, 0.3],
    ] {
        specs.push(MechanismSpec::Christofides {
            distribution: CardDistribution::new(d).unwrap(),
        });
    }
    for eps in [0.25, 1.0] {
        for kind in [
            MechanismKind::Warner,
            MechanismKind::Simmons,
            MechanismKind::Christofides,
        ] {
            let aux = DesignAux { pi_b: 0.3, p2: 0.1 };
            specs.push(params_from_epsilon(kind, budget(eps), &aux).unwrap());
        }
    }
    let mut cases = 0;
    let mut worst: f64 = 0.0;
    for n in 2..=6usize {
        let mut all = specs.clone();
        let mut decks = 0;
        for a in 0..=n as u64 {
            for b in 0..=n as u64 - a {
                if let Ok(deck) = Deck::from_counts(vec![a, b, n as u64 - a - b]) {
                    all.push(MechanismSpec::ImprovedChristofides {
                        distribution: deck.realized_distribution().clone(),
                    });
                    decks += 1;
                }
            }
        }
        ensure(decks >= 3, || format!("only {decks} decks at N = {n}"))?;
        for spec in &all {
            for m in 0..=n {
                let pop = Population::from_proportion(n, m as f64 / n as f64).unwrap();
                let pi = pop.true_proportion();
                let exact = exact_oracle(spec, &pop).map_err(|e| e.to_string())?;
                let theory = variance_theoretical(spec, n as u64, pi).map_err(|e| e.to_string())?;
                let dm = (exact.mean - pi).abs();
                let dv = (exact.variance - theory).abs();
                worst = worst.max(dm).max(dv);
                ensure(dm <= 1e-12 && dv <= 1e-12, || {
                    format!("{spec:?} N={n} pi={pi}: mean off {dm:e}, variance off {dv:e}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, largest deviation {worst:.1e}"))
}

fn variance_curve() -> Outcome {
    let mut config = SimConfig::new(
        MechanismKind::ALL.to_vec(),
        vec![0.25, 0.5, 1.0, 2.0],
        100,
        0.1,
    );
    config.aux = DesignAux { pi_b: 0.5, p2: 0.5 };
    config.replications = 10_000;
    config.seed = 20_240_601;
    let report = monte_carlo(&config).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for kind in MechanismKind::ALL {
        let rows: Vec<_> = report.rows.iter().filter(|r| r.mechanism == kind).collect();
        ensure(rows.len() == 4, || format!("{kind}: {} rows", rows.len()))?;
        for r in &rows {
            let emp = r.var_empirical.unwrap();
            let rel = (emp - r.var_theoretical).abs() / r.var_theoretical;
            worst = worst.max(rel);
            ensure(rel <= 0.05, || {
                format!(
                    "{kind} eps {}: empirical {emp}, theory {}",
                    r.epsilon, r.var_theoretical
                )
            })?;
        }
        for w in rows.windows(2) {
            ensure(
                w[1].var_theoretical < w[0].var_theoretical
                    && w[1].var_empirical < w[0].var_empirical,
                || format!("{kind}: variance not decreasing at eps {}", w[1].epsilon),
            )?;
        }
    }
    Ok(format!(
        "16 cells, largest relative error {:.2}%",
        100.0 * worst
    ))
}

fn small_deck_ordering() -> Outcome {
    // targets chosen so the 9-card deck realizes (2,3,4) and (1,3,5)
    let targets = vec![0.7, 1.6];
    let families = [
        (
            Family::ImprovedChristofides,
            MechanismKind::ImprovedChristofides,
        ),
        (Family::WarnerSimmons, MechanismKind::Warner),
        (Family::Christofides, MechanismKind::Christofides),
    ];
    let mut regimes = Vec::new();
    let mut compared = 0;
    for members in [1, 2, 4] {
        let pi = members as f64 / 9.0;
        let mut config = SimConfig::new(MechanismKind::ALL.to_vec(), targets.clone(), 9, pi);
        config.aux = DesignAux {
            pi_b: 0.5,
            p2: 0.36,
        };
        config.replications = 100_000;
        config.seed = 9;
        let report: SimulationReport = monte_carlo(&config).map_err(|e| e.to_string())?;
        for idx in 0..targets.len() {
            let row = |k| report.find(k, idx).ok_or_else(|| format!("no {k} row"));
            let eps = row(MechanismKind::Warner)?.epsilon;
            let p2 = row(MechanismKind::ImprovedChristofides)?.p2;
            ensure((p2 - 1.0 / 3.0).abs() < 1e-12, || {
                format!("realized p2 {p2}")
            })?;
            let simmons = row(MechanismKind::Simmons)?.var_theoretical;
            let warner = row(MechanismKind::Warner)?.var_theoretical;
            ensure((simmons - warner).abs() <= 1e-12, || {
                "Simmons differs from Warner".into()
            })?;

            let expected = classify_regime(pi, 9, budget(eps), p2)
                .map_err(|e| e.to_string())?
                .regime_from_intervals()
                .ok_or_else(|| format!("pi {pi} eps {eps} sits on a boundary"))?;
            let rank = |f: Family| expected.ordering().iter().position(|&g| g == f).unwrap();
            for (i, &(fa, ka)) in families.iter().enumerate() {
                for &(fb, kb) in &families[i + 1..] {
                    let (ta, tb) = (row(ka)?.var_theoretical, row(kb)?.var_theoretical);
                    ensure((ta < tb) == (rank(fa) < rank(fb)) && ta != tb, || {
                        format!("pi {pi} eps {eps}: theory {fa:?}={ta} vs {fb:?}={tb} against {expected:?}")
                    })?;
                    if (ta - tb).abs() / ta.min(tb) >= 0.10 {
                        let (ea, eb) = (
                            row(ka)?.var_empirical.unwrap(),
                            row(kb)?.var_empirical.unwrap(),
                        );
                        ensure((ea < eb) == (ta < tb), || {
                            format!("pi {pi} eps {eps}: empirical {fa:?}={ea} vs {fb:?}={eb}")
                        })?;
                        compared += 1;
                    }
                }
            }
            regimes.push(format!("{members}/9@{eps:.3}:{expected:?}"));
        }
    }
    Ok(format!(
        "{} ({compared} separated pairs simulated)",
        regimes.join(", ")
    ))
}

fn reductions() -> Outcome {
    let epsilons = [0.01, 0.05, 0.25, 0.5, 1.0, 2.0];
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
    for aux in [
        DesignAux::default(),
        DesignAux { pi_b: 0.2, p2: 0.3 },
        DesignAux {
            pi_b: 0.8,
            p2: 0.01,
        },
    ] {
        for kind in MechanismKind::ALL {
            for eps in epsilons {
                let spec =
                    params_from_epsilon(kind, budget(eps), &aux).map_err(|e| e.to_string())?;
                let back = epsilon_of(&spec).map_err(|e| e.to_string())?.epsilon();
                ensure((back - eps).abs() <= 1e-12, || {
                    format!("{kind} eps {eps}: {back}")
                })?;
            }
        }
    }
    for eps in epsilons {
        for n in [10u64, 10_000, 3_252_599] {
            let mc = min_variance_at_epsilon(MechanismKind::Christofides, budget(eps), n, 0.1, 0.0)
                .unwrap();
            let mw =
                min_variance_at_epsilon(MechanismKind::Warner, budget(eps), n, 0.1, 0.0).unwrap();
            ensure(close(mc, mw), || format!("MC {mc} vs MW {mw} at eps {eps}"))?;
            let warner =
                params_from_epsilon(MechanismKind::Warner, budget(eps), &DesignAux::default())
                    .unwrap();
            let simmons =
                params_from_epsilon(MechanismKind::Simmons, budget(eps), &DesignAux::default())
                    .unwrap();
            for pi in [0.0778, 0.3, 0.5, 0.9] {
                let w = variance_theoretical(&warner, n, pi).unwrap();
                let s = variance_theoretical(&simmons, n, pi).unwrap();
                ensure(close(s, w), || {
                    format!("Simmons {s} vs Warner {w} at eps {eps} pi {pi}")
                })?;
            }
        }
    }
    Ok("all identities within 1e-12".into())
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name);
    let s = |path: &Path| path.to_str().unwrap().to_string();
    let base = [
        "simulate",
        "--mechanism",
        "all",
        "--epsilon",
        "0.25,0.5,1",
        "--n",
        "200",
        "--pi-a",
        "0.15",
        "--p2",
        "0.05",
        "--reps",
        "3000",
        "--seed",
        "4242",
    ];
    let mut checks = 0;
    for format in ["csv", "json"] {
        let first = p(&format!("first.{format}"));
        let mut args: Vec<String> = base.iter().map(|a| a.to_string()).collect();
        args.extend([
            "--format".into(),
            format.into(),
            "--threads".into(),
            "1".into(),
        ]);
        args.extend(["--out".into(), s(&first)]);
        cli(&args.iter().map(String::as_str).collect::<Vec<_>>())?;
        let manifest_path = p(&format!("first.{format}.manifest.json"));
        let manifest = RunManifest::read(&manifest_path).map_err(|e| e.to_string())?;
        ensure(manifest.seed == Some(4242), || {
            "manifest lacks the seed".into()
        })?;
        let reference = read(&first)?;
        for threads in ["1", "2", "4"] {
            let again = p(&format!("replay-{threads}.{format}"));
            cli(&[
                "replay",
                &s(&manifest_path),
                "--threads",
                threads,
                "--out",
                &s(&again),
            ])?;
            ensure(read(&again)? == reference, || {
                format!("{format} replay with {threads} threads differs")
            })?;
            checks += 1;
        }
    }
    let stdout_one = cli(&[&base[..], &["--threads", "1"]].concat())?;
    let stdout_three = cli(&[&base[..], &["--threads", "3"]].concat())?;
    ensure(stdout_one == stdout_three, || "direct reruns differ".into())?;
    ensure(
        stdout_one.as_bytes() == read(&p("first.csv"))?.as_slice(),
        || "stdout differs from file output".into(),
    )?;
    Ok(format!("{} byte comparisons identical", checks + 2))
}
