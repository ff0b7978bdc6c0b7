#![no_main]

use libfuzzer_sys::fuzz_target;
use rfunfold::datagen::DatasetManifest;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(manifest) = DatasetManifest::from_json(text) {
        let again = DatasetManifest::from_json(&manifest.to_json()).expect("own output parses");
        assert_eq!(again, manifest);
    }
});
