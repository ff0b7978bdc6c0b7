#![no_main]

use libfuzzer_sys::fuzz_target;
use rfunfold_cli::config::apply_override;
use rfunfold_cli::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = ExperimentConfig::from_json(text) {
        let stored = cfg.to_json();
        let again = ExperimentConfig::from_json(&stored).expect("own output parses");
        assert_eq!(again.to_json(), stored);
    }
    // the same bytes as a command-line override
    let mut value = serde_json::to_value(ExperimentConfig::default()).unwrap();
    let _ = apply_override(&mut value, text);
});
