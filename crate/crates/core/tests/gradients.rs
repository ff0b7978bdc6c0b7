use rfunfold::estimation::WlmpModel;
use rfunfold::layers::{
    make_classic_model, Block, Cascade, ClassicKind, FirFilterLayer, Layer, MemoryPolynomialLayer,
    PowerMode, StaticPowerLayer, WidelyLinearLayer,
};
use rfunfold::numerics::{complex_gaussian, DEFAULT_FD_STEP};
use rfunfold::training::{compare_input_gradients, compare_param_gradients, cost_adjoint};
use rfunfold::{Complex64, RngStream};

const TOL: f64 = 1e-6;
const TRIPLES: u64 = 50;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn assert_grads<B: Block + Clone>(model: &B, x: &[Complex64], t: &[Complex64], what: &str) {
    if model.param_count() > 0 {
        let e = compare_param_gradients(model, x, t, DEFAULT_FD_STEP).unwrap().max_relative_error();
        assert!(e < TOL, "{what}: parameter gradient error {e:e}");
    }
    let e = compare_input_gradients(model, x, t, DEFAULT_FD_STEP).unwrap().max_relative_error();
    assert!(e < TOL, "{what}: input adjoint error {e:e}");
}

fn signals(rng: &mut RngStream, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    (complex_gaussian(rng, n, 1.0), complex_gaussian(rng, n, 1.0))
}

fn random_cascade(rng: &mut RngStream, p: usize, m: usize) -> Cascade {
    let mut model = Cascade::iq_pa(p, m).unwrap();
    let mut params = vec![c(1.0, 0.0) + 0.2 * complex_gaussian(rng, 1, 1.0)[0]];
    params.push(0.1 * complex_gaussian(rng, 1, 1.0)[0]);
    let n = model.param_count() - 2;
    params.extend(complex_gaussian(rng, n, 1.0 / n as f64));
    model.set_params(&params).unwrap();
    model
}

#[test]
fn fir_layer() {
    let mut rng = RngStream::new(100, 0);
    for k in 0..TRIPLES {
        let m = 1 + (k as usize % 5);
        let fir = FirFilterLayer::new(complex_gaussian(&mut rng, m, 1.0)).unwrap();
        let (x, t) = signals(&mut rng, 12);
        assert_grads(&fir, &x, &t, "fir");
    }
}

#[test]
fn widely_linear_layer() {
    let mut rng = RngStream::new(101, 0);
    for _ in 0..TRIPLES {
        let k = complex_gaussian(&mut rng, 2, 1.0);
        let (x, t) = signals(&mut rng, 8);
        assert_grads(&WidelyLinearLayer::new(k[0], k[1]), &x, &t, "widely linear");
    }
}

#[test]
fn static_power_layers() {
    let mut rng = RngStream::new(102, 0);
    for k in 0..TRIPLES {
        let p = 1 + (k as usize % 5);
        for mode in [PowerMode::RawPower, PowerMode::Baseband] {
            let layer = StaticPowerLayer::new(p, mode).unwrap();
            let (x, t) = signals(&mut rng, 8);
            assert_grads(&layer, &x, &t, &format!("power p={p} {mode:?}"));
        }
    }
}

#[test]
fn memory_polynomial_layers() {
    let mut rng = RngStream::new(103, 0);
    for k in 0..TRIPLES {
        let m = 1 + (k as usize % 4);
        let mut layer = if k % 2 == 0 {
            MemoryPolynomialLayer::odd(5, m).unwrap()
        } else {
            MemoryPolynomialLayer::full(4, m).unwrap()
        };
        let n = layer.param_count();
        layer.set_params(&complex_gaussian(&mut rng, n, 1.0 / n as f64)).unwrap();
        let (x, t) = signals(&mut rng, 10);
        assert_grads(&layer, &x, &t, "memory polynomial");
    }
}

#[test]
fn wlmp_model() {
    let mut rng = RngStream::new(104, 0);
    for k in 0..TRIPLES {
        let p = [1, 3, 5][k as usize % 3];
        let m = 1 + (k as usize % 3);
        let mut w = WlmpModel::zeros(p, m).unwrap();
        let n = w.param_count();
        w.set_params(&complex_gaussian(&mut rng, n, 1.0 / n as f64)).unwrap();
        let (x, t) = signals(&mut rng, 10);
        assert_grads(&w, &x, &t, "wlmp");
    }
}

#[test]
fn cascades_and_parallel_models() {
    let mut rng = RngStream::new(105, 0);
    for k in 0..TRIPLES {
        let (x, t) = signals(&mut rng, 10);
        let model = random_cascade(&mut rng, [1, 3, 5][k as usize % 3], 1 + k as usize % 3);
        assert_grads(&model, &x, &t, "iq+pa cascade");

        let kind = [
            ClassicKind::Wiener,
            ClassicKind::Hammerstein,
            ClassicKind::HammersteinWiener,
            ClassicKind::ParallelHammerstein,
        ][k as usize % 4];
        let mut classic = make_classic_model(kind, 3, 3, 2).unwrap();
        let n = classic.param_count();
        classic.set_params(&complex_gaussian(&mut rng, n, 0.3)).unwrap();
        assert_grads(&classic, &x, &t, &format!("{kind:?}"));
    }
}

#[test]
fn full_cascade_at_reference_sizes() {
    let mut rng = RngStream::new(106, 0);
    for p in [3, 5, 7, 9] {
        for _ in 0..10 {
            let model = random_cascade(&mut rng, p, 13);
            let (x, t) = signals(&mut rng, 40);
            let e = compare_param_gradients(&model, &x, &t, DEFAULT_FD_STEP)
                .unwrap()
                .max_relative_error();
            assert!(e < TOL, "P={p}: {e:e}");
        }
    }
}

/// Backward through a memoryless IQ+PA cascade, written out sample by sample
/// from the chain rule rather than through the layer implementations.
#[test]
fn composition_matches_hand_chained_rules() {
    let mut rng = RngStream::new(107, 0);
    let model = random_cascade(&mut rng, 5, 1);
    let p = model.params();
    let (k1, k2, h) = (p[0], p[1], &p[2..]);
    let orders = [1usize, 3, 5];
    let (x, t) = signals(&mut rng, 16);

    let mut m = model.clone();
    let y = m.forward(&x);
    let a = cost_adjoint(&y, &t).unwrap();
    let got = m.backward(&a).unwrap();

    let mut want = vec![c(0.0, 0.0); p.len()];
    let mut want_input = Vec::new();
    for n in 0..x.len() {
        let u = k1 * x[n] + k2 * x[n].conj();
        let r = u.norm();
        let mut dy_du = c(0.0, 0.0);
        let mut dy_dubar = c(0.0, 0.0);
        for (i, &q) in orders.iter().enumerate() {
            let phi = u * r.powi(q as i32 - 1);
            want[2 + i] += a[n] * phi.conj();
            dy_du += h[i] * (q as f64 + 1.0) / 2.0 * r.powi(q as i32 - 1);
            if q > 1 {
                dy_dubar += h[i] * (q as f64 - 1.0) / 2.0 * u * u * r.powi(q as i32 - 3);
            }
        }
        let b = a[n] * dy_du.conj() + a[n].conj() * dy_dubar;
        want[0] += b * x[n].conj();
        want[1] += b * x[n];
        want_input.push(b * k1.conj() + b.conj() * k2);
    }
    for (g, w) in got.params.iter().zip(&want) {
        assert!((g - w).norm() <= 1e-12 * w.norm().max(1.0), "{g} vs {w}");
    }
    for (g, w) in got.input.iter().zip(&want_input) {
        assert!((g - w).norm() <= 1e-12 * w.norm().max(1.0), "{g} vs {w}");
    }
}

#[test]
fn zero_input_is_finite_everywhere() {
    let x = vec![c(0.0, 0.0); 6];
    let t = vec![c(1.0, -1.0); 6];
    let mut models: Vec<Layer> = vec![
        FirFilterLayer::new(vec![c(1.0, 1.0), c(0.5, 0.0)]).unwrap().into(),
        WidelyLinearLayer::new(c(1.0, 0.0), c(0.1, 0.1)).into(),
        MemoryPolynomialLayer::full(5, 3).unwrap().into(),
    ];
    for p in 1..=5 {
        models.push(StaticPowerLayer::new(p, PowerMode::Baseband).unwrap().into());
        models.push(StaticPowerLayer::new(p, PowerMode::RawPower).unwrap().into());
    }
    for mut layer in models {
        let y = layer.forward(&x);
        let g = layer.backward(&cost_adjoint(&y, &t).unwrap()).unwrap();
        let finite = |v: &[Complex64]| v.iter().all(|z| z.is_finite());
        assert!(finite(&y) && finite(&g.input) && finite(&g.params), "{}", layer.name());
    }
    let mut cascade = Cascade::iq_pa(9, 4).unwrap();
    let y = cascade.forward(&x);
    let g = cascade.backward(&cost_adjoint(&y, &t).unwrap()).unwrap();
    assert!(g.params.iter().chain(&g.input).all(|z| z.is_finite()));
}

#[test]
fn gauge_rescaling_leaves_output_invariant() {
    let mut rng = RngStream::new(108, 0);
    let model = random_cascade(&mut rng, 7, 3);
    let x = complex_gaussian(&mut rng, 200, 1.0);
    let alpha = c(0.7, -1.3);
    let mut p = model.params();
    p[0] *= alpha;
    p[1] *= alpha;
    for (i, order) in [1, 3, 5, 7].iter().enumerate() {
        let g = alpha * alpha.norm().powi(order - 1);
        for tap in &mut p[2 + 3 * i..2 + 3 * (i + 1)] {
            *tap /= g;
        }
    }
    let mut rescaled = model.clone();
    rescaled.set_params(&p).unwrap();
    let (a, b) = (model.evaluate(&x), rescaled.evaluate(&x));
    let peak = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (u, v) in a.iter().zip(&b) {
        assert!((u - v).norm() < 1e-12 * peak);
    }
    assert_ne!(model.params(), rescaled.params());
}

#[test]
fn backward_without_forward_is_rejected() {
    let mut layer = FirFilterLayer::new(vec![c(1.0, 0.0)]).unwrap();
    assert!(layer.backward(&[c(1.0, 0.0)]).is_err());
}
