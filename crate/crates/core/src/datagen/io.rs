use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ComplexSignal;

pub const SIGNAL_MAGIC: [u8; 8] = *b"RFUSIG\0\0";
pub const SIGNAL_FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 16;
const PREAMBLE_LEN: usize = HEADER_LEN + 16;
const SAMPLE_LEN: usize = 16;

/// Binary layout: magic (8 bytes), version (u32 LE), reserved (u32), sample
/// rate (f64 LE), sample count (u64 LE), then `re, im` pairs as f64 LE.
pub fn encode_signal(signal: &ComplexSignal) -> Vec<u8> {
    let mut out = Vec::with_capacity(PREAMBLE_LEN + SAMPLE_LEN * signal.len());
    out.extend_from_slice(&SIGNAL_MAGIC);
    out.extend_from_slice(&SIGNAL_FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&signal.sample_rate_hz.to_le_bytes());
    out.extend_from_slice(&(signal.len() as u64).to_le_bytes());
    for s in &signal.samples {
        out.extend_from_slice(&s.re.to_le_bytes());
        out.extend_from_slice(&s.im.to_le_bytes());
    }
    out
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8-byte slice"))
}

/// Inverse of [`encode_signal`]. Decoded signals are non-empty and finite.
pub fn decode_signal(bytes: &[u8]) -> Result<ComplexSignal> {
    if bytes.len() < PREAMBLE_LEN {
        return Err(Error::CorruptHeader(format!(
            "{} bytes is shorter than the {PREAMBLE_LEN}-byte header",
            bytes.len()
        )));
    }
    if bytes[..8] != SIGNAL_MAGIC {
        return Err(Error::CorruptHeader("bad magic".into()));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4-byte slice"));
    if version != SIGNAL_FORMAT_VERSION {
        return Err(Error::CorruptHeader(format!("unsupported version {version}")));
    }
    if bytes[12..HEADER_LEN] != [0; 4] {
        return Err(Error::CorruptHeader("reserved header bytes are not zero".into()));
    }
    let rate = f64_at(bytes, HEADER_LEN);
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::CorruptHeader(format!("invalid sample rate {rate}")));
    }
    let count = u64::from_le_bytes(bytes[HEADER_LEN + 8..PREAMBLE_LEN].try_into().expect("8-byte slice"));
    if count == 0 {
        return Err(Error::EmptySignal);
    }
    let payload = &bytes[PREAMBLE_LEN..];
    let expected = usize::try_from(count)
        .ok()
        .and_then(|c| c.checked_mul(SAMPLE_LEN))
        .unwrap_or(usize::MAX);
    if payload.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: payload.len(),
        });
    }
    if payload.len() > expected {
        return Err(Error::CorruptHeader(format!(
            "{} trailing bytes after {count} samples",
            payload.len() - expected
        )));
    }
    let samples: Vec<Complex64> = payload
        .chunks_exact(SAMPLE_LEN)
        .map(|c| Complex64::new(f64_at(c, 0), f64_at(c, 8)))
        .collect();
    let signal = ComplexSignal::new(samples, rate)?;
    signal.validate()?;
    Ok(signal)
}

pub fn write_signal_binary(path: &Path, signal: &ComplexSignal) -> Result<()> {
    fs::write(path, encode_signal(signal)).map_err(|e| Error::io(path, e))
}

pub fn read_signal_binary(path: &Path) -> Result<ComplexSignal> {
    decode_signal(&fs::read(path).map_err(|e| Error::io(path, e))?)
}

/// CSV with header `re,im`; floats use the shortest round-trip form.
pub fn signal_to_csv(signal: &ComplexSignal) -> String {
    let mut out = String::with_capacity(8 + 48 * signal.len());
    out.push_str("re,im\n");
    for s in &signal.samples {
        out.push_str(&format!("{},{}\n", s.re, s.im));
    }
    out
}

/// Parses the `re,im` CSV form. The format carries no sample rate, so the
/// caller supplies it.
pub fn parse_signal_csv(text: &str, sample_rate_hz: f64) -> Result<ComplexSignal> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::CorruptHeader(e.to_string()))?;
    if headers.len() != 2 || &headers[0] != "re" || &headers[1] != "im" {
        return Err(Error::CorruptHeader(format!(
            "expected header re,im, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut samples = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Format(format!("row {}: {e}", i + 1)))?;
        let field = |k: usize| -> Result<f64> {
            record
                .get(k)
                .ok_or_else(|| Error::Format(format!("row {}: missing column", i + 1)))?
                .parse()
                .map_err(|e| Error::Format(format!("row {}: {e}", i + 1)))
        };
        samples.push(Complex64::new(field(0)?, field(1)?));
    }
    let signal = ComplexSignal::new(samples, sample_rate_hz)?;
    signal.validate()?;
    Ok(signal)
}

pub fn write_signal_csv(path: &Path, signal: &ComplexSignal) -> Result<()> {
    fs::write(path, signal_to_csv(signal)).map_err(|e| Error::io(path, e))
}

pub fn read_signal_csv(path: &Path, sample_rate_hz: f64) -> Result<ComplexSignal> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_signal_csv(&text, sample_rate_hz)
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Writes CSV for `.csv` paths and the binary format otherwise.
pub fn write_signal(path: &Path, signal: &ComplexSignal) -> Result<()> {
    if is_csv(path) {
        write_signal_csv(path, signal)
    } else {
        write_signal_binary(path, signal)
    }
}

/// Reads by extension; `csv_sample_rate_hz` is used only for CSV input.
pub fn read_signal(path: &Path, csv_sample_rate_hz: f64) -> Result<ComplexSignal> {
    if is_csv(path) {
        read_signal_csv(path, csv_sample_rate_hz)
    } else {
        read_signal_binary(path)
    }
}
