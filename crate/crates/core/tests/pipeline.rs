//! Synthetic data through ingestion, survey and estimation, and report
//! serialization round trips.

use rrldp::analytics::{
    estimate, params_from_epsilon, variance_theoretical, DesignAux, PrivacyBudget,
};
use rrldp::io::{
    emit_report, ingest_csv, read_csv_report, read_json_report, write_synthetic_hcovany,
    DatasetCoding, ReportFormat, RunManifest,
};
use rrldp::mechanisms::{survey_run, MechanismKind};
use rrldp::rng::SeededSource;
use rrldp::simulation::{monte_carlo, sweep_epsilon, SimConfig};

#[test]
fn synthetic_survey_recovers_proportion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hcovany.csv");
    let file = std::fs::File::create(&path).unwrap();
    write_synthetic_hcovany(std::io::BufWriter::new(file), 5_000, 0.0778, 1).unwrap();
    let pop = ingest_csv(&path, &DatasetCoding::hcovany()).unwrap();
    assert_eq!(pop.len(), 5_000);
    let pi = pop.true_proportion();
    assert!((pi - 0.0778).abs() < 1e-12);

    let aux = DesignAux {
        pi_b: 0.5,
        p2: 0.01,
    };
    for kind in MechanismKind::ALL {
        let spec = params_from_epsilon(kind, PrivacyBudget::new(0.5).unwrap(), &aux)
            .unwrap()
            .realize(pop.len() as u64)
            .unwrap();
        let sd = variance_theoretical(&spec, pop.len() as u64, pi)
            .unwrap()
            .sqrt();
        let hits = (0..200u64)
            .filter(|&seed| {
                let responses = survey_run(&pop, &spec, &mut SeededSource::new(seed)).unwrap();
                let est = estimate(&spec, &responses).unwrap().value();
                (est - pi).abs() <= 4.0 * sd
            })
            .count();
        assert!(hits >= 198, "{kind}: {hits}/200");
    }
}

#[test]
fn reports_round_trip() {
    let mut config = SimConfig::new(MechanismKind::ALL.to_vec(), vec![0.5, 1.0], 40, 0.25);
    config.aux.p2 = 0.05;
    config.replications = 50;
    config.seed = 5;
    let simulated = monte_carlo(&config).unwrap();
    config.replications = 0;
    let analytic = sweep_epsilon(&config).unwrap();
    let manifest = RunManifest::new("simulate", vec![], serde_json::json!({}), Some(5), "t");

    for report in [simulated, analytic] {
        let csv = emit_report(&report, ReportFormat::Csv, None).unwrap();
        assert_eq!(csv, emit_report(&report, ReportFormat::Csv, None).unwrap());
        assert_eq!(read_csv_report(&csv).unwrap(), report);
        let lines = std::str::from_utf8(&csv).unwrap().lines().count();
        assert_eq!(lines, 1 + report.rows.len());

        let json = emit_report(&report, ReportFormat::Json, Some(&manifest)).unwrap();
        let doc = read_json_report(&json).unwrap();
        assert_eq!(doc.rows, report.rows);
        assert_eq!(doc.manifest.as_ref(), Some(&manifest));
    }
}
