#![no_main]

use gr1_core::specml::{parse_var_list, Vars};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let vars = Vars::new(vec!["b1".into(), "b2".into(), "b3".into()], vec!["f1".into()]);
    if let Ok(list) = parse_var_list(data, &vars) {
        assert!(list.iter().all(|&i| i < vars.len()));
    }
    let _ = gr1_cli::session::parse_subset(data, &vars);
});
