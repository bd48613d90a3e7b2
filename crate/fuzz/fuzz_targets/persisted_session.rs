#![no_main]

use gr1_cli::session::{PersistedSession, Session};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 64 * 1024 {
        return;
    }
    let Ok(p) = serde_json::from_slice::<PersistedSession>(data) else { return };
    if p.nodes.len() > 16 {
        return;
    }
    let _ = Session::restore(&p, 1 << 12);
});
