//! Per-player constraint lists derived from a specification.
//!
//! A transition part written without any `X(...)` is an invariant. For the
//! system, and for environment invariants over environment variables only,
//! it is required of the initial valuation and of every next valuation. An
//! environment invariant that mentions system variables cannot be enforced
//! on the next step by the environment alone, so it is read as a condition
//! on the current valuation: violating it is an environment deadlock.

use crate::specml::{BoolExpr, Gr1Part, Gr1Spec, Owner, PartClass, Vars};
use crate::valuation::Valuation;

#[derive(Clone, Debug, Default)]
pub struct PlayerRules {
    /// Conditions on the initial valuation.
    pub init: Vec<BoolExpr>,
    /// Conditions on a step `(now, next)`.
    pub trans: Vec<BoolExpr>,
    pub liveness: Vec<BoolExpr>,
}

impl PlayerRules {
    pub fn init_holds(&self, v: Valuation) -> bool {
        self.init.iter().all(|e| e.holds(v, v))
    }

    pub fn trans_holds(&self, now: Valuation, next: Valuation) -> bool {
        self.trans.iter().all(|e| e.holds(now, next))
    }
}

#[derive(Clone, Debug)]
pub struct Rules {
    pub vars: Vars,
    pub env: PlayerRules,
    pub sys: PlayerRules,
}

impl Rules {
    /// Compiles `spec` after expanding response sugar.
    pub fn compile(spec: &Gr1Spec) -> Rules {
        let spec = spec.desugar();
        let mut env = PlayerRules::default();
        let mut sys = PlayerRules::default();
        for part in &spec.parts {
            let target = match part.player {
                Owner::Env => &mut env,
                Owner::Sys => &mut sys,
            };
            add_part(target, part, &spec.vars);
        }
        Rules {
            vars: spec.vars,
            env,
            sys,
        }
    }
}

fn add_part(rules: &mut PlayerRules, part: &Gr1Part, vars: &Vars) {
    match part.class {
        PartClass::Init => rules.init.push(part.body.clone()),
        PartClass::Liveness => rules.liveness.push(part.body.clone()),
        PartClass::Trans if part.body.has_next() => rules.trans.push(part.body.clone()),
        PartClass::Trans => {
            let env_only = part
                .body
                .refs()
                .iter()
                .all(|r| vars.owner(r.index) == Owner::Env);
            if part.player == Owner::Env && !env_only {
                rules.trans.push(part.body.clone());
            } else {
                rules.init.push(part.body.clone());
                rules.trans.push(part.body.shift_next());
            }
        }
    }
}
