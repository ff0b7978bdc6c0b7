use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layers::{Block, Cascade, FirFilterLayer, MemoryPolynomialLayer, WidelyLinearLayer};
use crate::numerics::{complex_gaussian, ComplexSignal, RngStream};

/// Known impairment chain used to synthesise the received signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruth {
    pub k1: Complex64,
    pub k2: Complex64,
    pub pa: MemoryPolynomialLayer,
    pub h_si: Vec<Complex64>,
    pub suppression_db: f64,
    /// noise power relative to the noiseless received power; `None` is noiseless
    pub noise_floor_db: Option<f64>,
}

const PA_ORDERS: [usize; 3] = [1, 3, 5];
const PA_MAGNITUDES: [f64; 3] = [1.0, 0.06, 0.01];
const PA_MEMORY: usize = 3;
const PA_DECAY: f64 = 0.3;
const SI_TAPS: usize = 4;
const SI_DECAY: f64 = 0.5;

impl GroundTruth {
    /// Default chain with random phases: `K1 = 1`, `K2 = 0.05 e^{j pi/6}`,
    /// PA orders {1, 3, 5} over 3 taps decaying by 0.3 per delay, a 4-tap SI
    /// channel decaying by 0.5 per tap, 53 dB suppression and a -45 dB floor.
    pub fn sample(rng: &mut RngStream) -> Result<Self> {
        let mut coefficients = Vec::with_capacity(PA_ORDERS.len() * PA_MEMORY);
        for (i, &c) in PA_MAGNITUDES.iter().enumerate() {
            for m in 0..PA_MEMORY {
                let phase = if i == 0 && m == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    rng.unit_phasor()
                };
                coefficients.push(phase * c * PA_DECAY.powi(m as i32));
            }
        }
        let pa = MemoryPolynomialLayer::with_coefficients(PA_ORDERS.to_vec(), PA_MEMORY, coefficients)?;
        let h_si = (0..SI_TAPS)
            .map(|k| rng.unit_phasor() * SI_DECAY.powi(k as i32))
            .collect();
        Ok(Self {
            k1: Complex64::new(1.0, 0.0),
            k2: Complex64::from_polar(0.05, std::f64::consts::FRAC_PI_6),
            pa,
            h_si,
            suppression_db: 53.0,
            noise_floor_db: Some(-45.0),
        })
    }

    /// `y = K1 x`: no PA, a unit channel, no suppression, no noise.
    pub fn identity(k1: Complex64) -> Result<Self> {
        Ok(Self {
            k1,
            k2: Complex64::new(0.0, 0.0),
            pa: MemoryPolynomialLayer::new(vec![1], 1)?,
            h_si: vec![Complex64::new(1.0, 0.0)],
            suppression_db: 0.0,
            noise_floor_db: None,
        })
    }

    pub fn noiseless(&self) -> Self {
        Self {
            noise_floor_db: None,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(format!("ground truth: {m}")));
        if !(self.k1.norm() > self.k2.norm()) {
            return bad("|K1| must exceed |K2|");
        }
        self.pa.validate()?;
        if self.pa.orders.iter().any(|p| p % 2 == 0) {
            return bad("PA orders must be odd");
        }
        if self.h_si.is_empty() {
            return bad("SI channel needs at least one tap");
        }
        let finite = [self.k1, self.k2]
            .iter()
            .chain(&self.pa.coefficients)
            .chain(&self.h_si)
            .all(|c| c.is_finite());
        if !finite {
            return bad("non-finite coefficient");
        }
        if !(self.suppression_db >= 0.0 && self.suppression_db.is_finite()) {
            return bad("suppression_db must be finite and >= 0");
        }
        if self.noise_floor_db.is_some_and(|n| !n.is_finite()) {
            return bad("noise_floor_db must be finite");
        }
        Ok(())
    }

    /// Memory of the WLMP that represents the whole chain exactly.
    pub fn effective_memory(&self) -> usize {
        self.pa.memory + self.h_si.len() - 1
    }

    /// The noiseless chain as a cascade of library layers (suppression folded
    /// into the SI channel taps).
    pub fn as_cascade(&self) -> Result<Cascade> {
        let gain = 10f64.powf(-self.suppression_db / 20.0);
        Cascade::new(vec![
            WidelyLinearLayer::new(self.k1, self.k2).into(),
            self.pa.clone().into(),
            FirFilterLayer::new(self.h_si.iter().map(|h| h * gain).collect())?.into(),
        ])
    }
}

/// Passes `x` through the ground-truth chain and adds circular Gaussian noise
/// at `noise_floor_db` relative to the measured noiseless output power.
pub fn apply_ground_truth(
    x: &ComplexSignal,
    truth: &GroundTruth,
    rng: &mut RngStream,
) -> Result<ComplexSignal> {
    truth.validate()?;
    x.validate()?;
    let mut y = truth.as_cascade()?.evaluate(x.as_slice());
    if let Some(floor_db) = truth.noise_floor_db {
        let power = crate::numerics::energy(&y) / y.len() as f64;
        let noise = complex_gaussian(rng, y.len(), power * 10f64.powf(floor_db / 10.0));
        y.iter_mut().zip(noise).for_each(|(s, n)| *s += n);
    }
    ComplexSignal::new(y, x.sample_rate_hz)
}
