#![no_main]

use libfuzzer_sys::fuzz_target;

use definetti::family::StateFamily;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(fam) = text.parse::<StateFamily>() {
        let again: StateFamily = fam.to_string().parse().expect("display parses back");
        assert_eq!(again, fam);
    }
});
