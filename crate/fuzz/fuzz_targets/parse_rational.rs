#![no_main]

use libfuzzer_sys::fuzz_target;
use rlab::parse::parse_rational;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        // decimals can widen past the digit limit once written as p/q
        if let (Ok(x), false) = (parse_rational(s), s.contains('.')) {
            assert_eq!(parse_rational(&x.to_string()).ok(), Some(x));
        }
    }
});
