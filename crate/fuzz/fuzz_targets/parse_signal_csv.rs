#![no_main]

use libfuzzer_sys::fuzz_target;
use rfunfold::datagen::{parse_signal_csv, signal_to_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(signal) = parse_signal_csv(text, 20e6) {
        let again = parse_signal_csv(&signal_to_csv(&signal), 20e6).expect("own output parses");
        assert_eq!(again.samples, signal.samples);
    }
});
