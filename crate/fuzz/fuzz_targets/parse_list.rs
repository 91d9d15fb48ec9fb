#![no_main]

use libfuzzer_sys::fuzz_target;
use rlab::parse::{parse_int_list, parse_list};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_list(s);
        let _ = parse_int_list(s);
    }
});
