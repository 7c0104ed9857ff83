#![no_main]

use libfuzzer_sys::fuzz_target;

use definetti_cli::config::SweepConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = text.parse::<SweepConfig>() {
        if cfg.validate().is_ok() && !cfg.output.contains('#') {
            let again: SweepConfig = cfg.to_string().parse().expect("serialized config parses");
            assert_eq!(again, cfg);
        }
    }
});
