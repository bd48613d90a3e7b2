#![no_main]

use gr1_core::specml::{format_spec, parse_spec};
use libfuzzer_sys::fuzz_target;

// Anything that parses must print to text that parses back to the same spec.
fuzz_target!(|data: &str| {
    let Ok(spec) = parse_spec(data) else { return };
    let text = format_spec(&spec);
    let again = parse_spec(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(again, spec);
});
