#![no_main]

use libfuzzer_sys::fuzz_target;

use definetti::wick::{normal_order, Word, MAX_WORD_LEN};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = text.parse::<Word>() {
        assert!(w.len() <= MAX_WORD_LEN);
        let again: Word = w.to_string().parse().expect("display parses back");
        assert_eq!(again, w);
        let _ = normal_order(&w);
    }
});
