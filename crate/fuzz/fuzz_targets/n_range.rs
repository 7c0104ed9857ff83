#![no_main]

use libfuzzer_sys::fuzz_target;

use definetti_cli::config::{parse_list, parse_n_range, MAX_RANGE_LEN};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = parse_n_range(text) {
        assert!(!v.is_empty() && v.len() <= MAX_RANGE_LEN);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
    let _ = parse_list("N", text);
});
