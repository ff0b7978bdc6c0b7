#![no_main]

use libfuzzer_sys::fuzz_target;
use rfunfold::datagen::{decode_signal, encode_signal};

fuzz_target!(|data: &[u8]| {
    if let Ok(signal) = decode_signal(data) {
        // anything accepted re-encodes to the same bytes
        assert_eq!(encode_signal(&signal), data);
    }
});
