use rfunfold::estimation::{wlmp_coefficient_count, WlmpModel};
use rfunfold::layers::{
    flops, make_classic_model, Block, Cascade, ClassicKind, FirFilterLayer, MemoryPolynomialLayer,
    Model, ModelDocument, WidelyLinearLayer,
};
use rfunfold::metrics::{complexity_report, render_complexity};
use rfunfold::numerics::complex_gaussian;
use rfunfold::{Complex64, RngStream};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn forward_examples() {
    let x = complex_gaussian(&mut RngStream::new(400, 0), 20, 1.0);
    assert_eq!(WidelyLinearLayer::identity().evaluate(&x), x);
    let wl = WidelyLinearLayer::new(c(1.0, 0.0), c(0.1, 0.0));
    assert!((wl.evaluate(&[c(1.0, 1.0)])[0] - c(1.1, 0.9)).norm() < 1e-15);
    let mp = MemoryPolynomialLayer::with_coefficients(vec![1, 3], 1, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert_eq!(mp.evaluate(&[c(2.0, 0.0)]), vec![c(8.0, 0.0)]);
    let fir = FirFilterLayer::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
    assert_eq!(fir.evaluate(&[c(1.0, 0.0), c(2.0, 0.0)]), vec![c(1.0, 0.0), c(2.0, 1.0)]);
}

#[test]
fn classic_models() {
    let x: Vec<Complex64> = (1..=6).map(|k| c(k as f64, 0.0)).collect();
    let w = make_classic_model(ClassicKind::Wiener, 1, 1, 1).unwrap();
    assert_eq!(w.evaluate(&x), x);

    let mut h = make_classic_model(ClassicKind::Hammerstein, 2, 2, 1).unwrap();
    h.set_params(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
    let y = h.evaluate(&x);
    for n in 0..6 {
        let prev = if n > 0 { x[n - 1] * x[n - 1] } else { c(0.0, 0.0) };
        assert!((y[n] - (x[n] * x[n] + prev)).norm() < 1e-12);
    }

    let mut hw = make_classic_model(ClassicKind::HammersteinWiener, 1, 2, 2).unwrap();
    let cc = c(0.5, 0.25);
    hw.set_params(&[cc]).unwrap();
    let a = c(1.5, -0.5);
    let want = (cc * a * a) * (cc * a * a);
    assert!((hw.evaluate(&[a])[0] - want).norm() < 1e-12);
    assert!("volterra".parse::<ClassicKind>().is_err());
}

#[test]
fn param_count_closed_forms() {
    for p in [3, 5, 7, 9] {
        for m in [1, 13] {
            assert_eq!(Cascade::iq_pa(p, m).unwrap().param_count(), (p + 1) * m / 2 + 2);
            assert_eq!(WlmpModel::zeros(p, m).unwrap().param_count(), m * (p + 1) * (p + 3) / 4);
        }
    }
    assert_eq!(Cascade::iq_pa(5, 13).unwrap().param_count(), 41);
    assert_eq!(wlmp_coefficient_count(5, 13), 156);
    assert_eq!(FirFilterLayer::identity(7).unwrap().param_count(), 7);
}

#[test]
fn flop_counts_within_reference_band() {
    let mbnn = Cascade::iq_pa(5, 13).unwrap().flop_count();
    let wlmp = WlmpModel::zeros(5, 13).unwrap().flop_count();
    assert_eq!(FirFilterLayer::identity(1).unwrap().flop_count(), 6);
    assert!((mbnn as f64 / 331.0 - 1.0).abs() <= 0.15, "{mbnn}");
    assert!((wlmp as f64 / 1558.0 - 1.0).abs() <= 0.15, "{wlmp}");
    assert_eq!(mbnn, Cascade::iq_pa(5, 13).unwrap().flop_count());
    assert!(flops::CONVENTION.contains("6"));
}

#[test]
fn complexity_table() {
    let rows = complexity_report(&[("wlmp".into(), 156, 1558), ("mbnn".into(), 41, 331)]).unwrap();
    assert_eq!(rows[1].param_reduction_display(), "73.7%");
    assert_eq!(rows[1].flop_reduction_display(), "78.8%");
    let text = render_complexity(&rows);
    assert!(text.contains("73.7%") && text.contains("78.8%"));
}

#[test]
fn model_documents_round_trip_bit_exactly() {
    let mut rng = RngStream::new(401, 0);
    let mut cascade = Cascade::iq_pa(5, 3).unwrap();
    let n = cascade.param_count();
    cascade.set_params(&complex_gaussian(&mut rng, n, 1.0)).unwrap();
    let mut wlmp = WlmpModel::zeros(3, 2).unwrap();
    let n = wlmp.param_count();
    wlmp.set_params(&complex_gaussian(&mut rng, n, 1e-7)).unwrap();
    let classic = make_classic_model(ClassicKind::ParallelHammerstein, 2, 3, 1).unwrap();
    for model in [Model::Cascade(cascade), Model::Wlmp(wlmp), classic] {
        let doc = ModelDocument::new(model.clone());
        let back = ModelDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back.model, model);
        let bits = |m: &Model| m.params().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>();
        assert_eq!(bits(&back.model), bits(&model));
    }
}
