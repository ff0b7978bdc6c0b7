use rfunfold::datagen::{
    apply_ground_truth, decode_signal, encode_signal, generate_dataset, generate_ofdm,
    generate_ofdm_with_symbols, parse_signal_csv, qpsk_point, read_signal, signal_to_csv,
    split_dataset, write_signal, DatasetManifest, GroundTruth, OfdmConfig, DATASET_FORMAT,
    DATASET_FORMAT_VERSION,
};
use rfunfold::estimation::fit_wlmp;
use rfunfold::layers::Block;
use rfunfold::metrics::cancellation_db;
use rfunfold::numerics::complex_gaussian;
use rfunfold::{Complex64, ComplexSignal, Error, RngStream};
use rustfft::FftPlanner;

fn truth(seed: u64) -> GroundTruth {
    GroundTruth::sample(&mut RngStream::new(seed, 11)).unwrap()
}

#[test]
fn spectrum_stays_in_band() {
    let cfg = OfdmConfig::default();
    let s = generate_ofdm(&cfg, &mut RngStream::new(500, 10)).unwrap();
    let n = s.len();
    let mut buf = s.samples.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let df = cfg.sample_rate_hz / n as f64;
    let mut inside = 0.0;
    let mut total = 0.0;
    for (k, v) in buf.iter().enumerate() {
        let f = if k < n / 2 { k as f64 * df } else { (k as f64 - n as f64) * df };
        total += v.norm_sqr();
        if f.abs() <= cfg.bandwidth_hz / 2.0 {
            inside += v.norm_sqr();
        }
    }
    assert!(inside / total >= 0.99, "in-band fraction {}", inside / total);
}

#[test]
fn qpsk_symbols_are_uniform() {
    let cfg = OfdmConfig {
        n_symbols: 98,
        ..OfdmConfig::default()
    };
    let (_, symbols) = generate_ofdm_with_symbols(&cfg, &mut RngStream::new(501, 10)).unwrap();
    assert!(symbols.len() >= 100_000);
    let mut counts = [0usize; 4];
    for s in &symbols {
        let i = (0..4).find(|&i| qpsk_point(i) == *s).expect("constellation point");
        counts[i] += 1;
    }
    let expected = symbols.len() as f64 / 4.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 3 degrees of freedom, 1% level
    assert!(chi2 < 11.345, "chi-square {chi2} for {counts:?}");
}

#[test]
fn dataset_is_deterministic() {
    let cfg = OfdmConfig::default();
    let (a, ta) = generate_dataset(&cfg, None, 9, 0.9).unwrap();
    let (b, tb) = generate_dataset(&cfg, None, 9, 0.9).unwrap();
    assert_eq!(ta, tb);
    assert_eq!(encode_signal(&a.x), encode_signal(&b.x));
    assert_eq!(encode_signal(&a.y), encode_signal(&b.y));
    let (c, _) = generate_dataset(&cfg, None, 10, 0.9).unwrap();
    assert_ne!(a.x, c.x);
}

#[test]
fn noiseless_chain_is_a_wlmp() {
    let gt = truth(502).noiseless();
    let (ds, gt) = generate_dataset(&OfdmConfig::default(), Some(&gt), 502, 0.9).unwrap();
    let s = ds.split(gt.effective_memory()).unwrap();
    let w = fit_wlmp(&s.train_x.samples, &s.train_y.samples, 5, gt.effective_memory()).unwrap();
    let c = cancellation_db(&s.train_y.samples, &w.evaluate(&s.train_x.samples)).unwrap();
    assert!(c.c_db > 80.0, "{}", c.c_db);
}

fn true_model_cancellation(gt: &GroundTruth, seed: u64) -> f64 {
    let (ds, gt) = generate_dataset(&OfdmConfig::default(), Some(gt), seed, 0.9).unwrap();
    let clean = gt.as_cascade().unwrap().evaluate(&ds.x.samples);
    cancellation_db(&ds.y.samples, &clean).unwrap().c_db
}

#[test]
fn noise_floor_sets_the_ceiling() {
    let gt = truth(503);
    assert_eq!(gt.noise_floor_db, Some(-45.0));
    let c = true_model_cancellation(&gt, 503);
    assert!((c - 45.0).abs() < 1.0, "{c}");

    let halved = GroundTruth {
        noise_floor_db: Some(-45.0 - 10.0 * 2f64.log10()),
        ..gt.clone()
    };
    let gain: f64 = (0..8)
        .map(|k| true_model_cancellation(&halved, 600 + k) - true_model_cancellation(&gt, 600 + k))
        .sum::<f64>()
        / 8.0;
    assert!((gain - 3.01).abs() < 0.2, "{gain}");
}

#[test]
fn identity_truth_reproduces_scaled_input() {
    let x = ComplexSignal::new(complex_gaussian(&mut RngStream::new(504, 0), 64, 1.0), 20e6).unwrap();
    let k1 = Complex64::new(0.3, 0.4);
    let y = apply_ground_truth(&x, &GroundTruth::identity(k1).unwrap(), &mut RngStream::new(1, 12)).unwrap();
    for (a, b) in y.samples.iter().zip(&x.samples) {
        assert!((a - k1 * b).norm() < 1e-15);
    }
}

#[test]
fn split_examples() {
    let (ds, _) = generate_dataset(&OfdmConfig::default(), None, 1, 0.9).unwrap();
    let s = ds.split(13).unwrap();
    assert_eq!((s.train_x.len(), s.test_x.len()), (18_432, 2_048));
    let joined: Vec<Complex64> = s.train_y.samples.iter().chain(&s.test_y.samples).copied().collect();
    assert_eq!(joined, ds.y.samples);
    assert!(matches!(split_dataset(&ds.x, &ds.y, 0.9999, 13), Err(Error::DegenerateSplit(_))));
}

#[test]
fn signal_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = ComplexSignal::new(complex_gaussian(&mut RngStream::new(505, 0), 1000, 1.0), 20e6).unwrap();
    let bin = dir.path().join("x.bin");
    let csv = dir.path().join("x.csv");
    write_signal(&bin, &s).unwrap();
    write_signal(&csv, &s).unwrap();
    let a = read_signal(&bin, 20e6).unwrap();
    let b = read_signal(&csv, 20e6).unwrap();
    assert_eq!(a, s);
    for (u, v) in a.samples.iter().zip(&b.samples) {
        assert!((u - v).norm() <= 1e-15);
    }
    assert!(matches!(read_signal(&dir.path().join("missing.bin"), 1.0), Err(Error::Io { .. })));
    assert!(matches!(
        decode_signal(&encode_signal(&s)[..32 + 16 * 999 + 8]),
        Err(Error::Truncated { .. })
    ));
    assert_eq!(parse_signal_csv(&signal_to_csv(&s), 20e6).unwrap(), s);
}

#[test]
fn manifest_round_trip() {
    let gt = truth(506);
    let m = DatasetManifest {
        format: DATASET_FORMAT.into(),
        format_version: DATASET_FORMAT_VERSION,
        seed: 506,
        ofdm: OfdmConfig::default(),
        split: 0.9,
        n_samples: 20_480,
        x_file: "x.bin".into(),
        y_file: "y.bin".into(),
        x_sha256: "00".into(),
        y_sha256: "11".into(),
        ground_truth: Some(gt),
    };
    assert_eq!(DatasetManifest::from_json(&m.to_json()).unwrap(), m);
    let bad = m.to_json().replace(DATASET_FORMAT, "other");
    assert!(DatasetManifest::from_json(&bad).is_err());
}
