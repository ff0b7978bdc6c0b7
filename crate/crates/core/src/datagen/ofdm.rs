use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexSignal, RngStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OfdmConfig {
    pub active_carriers: usize,
    pub fft_size: usize,
    pub cp_length: usize,
    pub n_symbols: usize,
    pub bandwidth_hz: f64,
    pub sample_rate_hz: f64,
}

impl Default for OfdmConfig {
    fn default() -> Self {
        Self {
            active_carriers: 1024,
            fft_size: 2048,
            cp_length: 512,
            n_symbols: 8,
            bandwidth_hz: 10e6,
            sample_rate_hz: 20e6,
        }
    }
}

impl OfdmConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.fft_size == 0 || self.n_symbols == 0 {
            return bad("fft_size and n_symbols must be >= 1".into());
        }
        if self.active_carriers == 0
            || !self.active_carriers.is_multiple_of(2)
            || self.active_carriers >= self.fft_size
        {
            return bad(format!(
                "active_carriers must be even, non-zero and below fft_size ({})",
                self.fft_size
            ));
        }
        if self.cp_length > self.fft_size {
            return bad("cyclic prefix longer than the symbol".into());
        }
        if !(self.bandwidth_hz > 0.0 && self.sample_rate_hz > 0.0)
            || !self.bandwidth_hz.is_finite()
            || !self.sample_rate_hz.is_finite()
        {
            return bad("bandwidth and sample rate must be positive".into());
        }
        let rate_ratio = self.sample_rate_hz / self.bandwidth_hz;
        let bin_ratio = self.fft_size as f64 / self.active_carriers as f64;
        if (rate_ratio - bin_ratio).abs() > 1e-9 * bin_ratio {
            return bad(format!(
                "sample_rate/bandwidth = {rate_ratio} but fft_size/active_carriers = {bin_ratio}"
            ));
        }
        Ok(())
    }

    pub fn symbol_length(&self) -> usize {
        self.fft_size + self.cp_length
    }

    pub fn signal_length(&self) -> usize {
        self.n_symbols * self.symbol_length()
    }
}

/// Gray-free QPSK mapping of a 2-bit index to `(+-1 +- j)/sqrt 2`.
pub fn qpsk_point(index: usize) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = if index & 1 == 0 { s } else { -s };
    let im = if index & 2 == 0 { s } else { -s };
    Complex64::new(re, im)
}

pub fn generate_ofdm(config: &OfdmConfig, rng: &mut RngStream) -> Result<ComplexSignal> {
    generate_ofdm_with_symbols(config, rng).map(|(s, _)| s)
}

/// Like [`generate_ofdm`] but also returns the QPSK symbols in the order they
/// were drawn (symbol-major, carriers from lowest to highest frequency).
pub fn generate_ofdm_with_symbols(
    config: &OfdmConfig,
    rng: &mut RngStream,
) -> Result<(ComplexSignal, Vec<Complex64>)> {
    config.validate()?;
    let n = config.fft_size;
    let half = (config.active_carriers / 2) as isize;
    let ifft = FftPlanner::new().plan_fft_inverse(n);
    let mut samples = Vec::with_capacity(config.signal_length());
    let mut symbols = Vec::with_capacity(config.n_symbols * config.active_carriers);
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..config.n_symbols {
        bins.fill(Complex64::new(0.0, 0.0));
        for k in (-half..0).chain(1..=half) {
            let point = qpsk_point(rng.below(4));
            symbols.push(point);
            bins[k.rem_euclid(n as isize) as usize] = point;
        }
        ifft.process(&mut bins);
        samples.extend_from_slice(&bins[n - config.cp_length..]);
        samples.extend_from_slice(&bins);
    }
    let power = crate::numerics::energy(&samples) / samples.len() as f64;
    let scale = power.sqrt().recip();
    samples.iter_mut().for_each(|s| *s *= scale);
    Ok((ComplexSignal::new(samples, config.sample_rate_hz)?, symbols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_frame_length_and_power() {
        let cfg = OfdmConfig::default();
        let s = generate_ofdm(&cfg, &mut RngStream::new(1, 0)).unwrap();
        assert_eq!(s.len(), 20_480);
        assert!((s.mean_power() - 1.0).abs() < 0.05);
        assert_eq!(s.sample_rate_hz, 20e6);
    }

    #[test]
    fn qpsk_points_unit_modulus() {
        for i in 0..4 {
            assert!((qpsk_point(i).norm() - 1.0).abs() < 1e-15);
        }
        assert_ne!(qpsk_point(0), qpsk_point(3));
    }

    #[test]
    fn rejects_inconsistent_rates() {
        let cfg = OfdmConfig {
            bandwidth_hz: 5e6,
            ..OfdmConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = OfdmConfig {
            active_carriers: 4096,
            ..OfdmConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
