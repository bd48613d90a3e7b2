#![no_main]

use gr1_core::specml::{parse_expr, parse_part, Owner, PartClass, Vars};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let vars = Vars::new(vec!["r".into(), "c".into()], vec!["g".into(), "v".into()]);
    let _ = parse_expr(data, &vars);
    for class in [PartClass::Init, PartClass::Trans, PartClass::Liveness] {
        for player in [Owner::Env, Owner::Sys] {
            let _ = parse_part(data, &vars, player, class);
        }
    }
});
