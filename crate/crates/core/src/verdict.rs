//! Three-valued answers with the rules that produced them.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub rule: String,
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub certificate: Vec<Rule>,
}

impl Decision {
    pub fn new(verdict: Verdict, rule: RuleId) -> Self {
        Decision { verdict, certificate: vec![rule.into()] }
    }

    pub fn then(mut self, rule: RuleId) -> Self {
        self.certificate.push(rule.into());
        self
    }

    /// Prepends the rules of `earlier`.
    pub fn after(mut self, earlier: &Decision) -> Self {
        let mut c = earlier.certificate.clone();
        c.append(&mut self.certificate);
        self.certificate = c;
        self
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleId(pub &'static str, pub &'static str);

impl From<RuleId> for Rule {
    fn from(r: RuleId) -> Rule {
        Rule { rule: r.0.to_string(), anchor: r.1.to_string() }
    }
}

pub mod rules {
    use super::RuleId;

    pub const CHARACTER_CASE: RuleId =
        RuleId("character-case", "rank one: distinguished iff trivial on the fixed subgroup");
    pub const GOW: RuleId = RuleId(
        "gow-selfdual",
        "characteristic zero: GL_n(k_0)-distinguished iff sigma-selfdual (Gow)",
    );
    pub const SELFDUAL_NECESSARY: RuleId =
        RuleId("selfdual-necessary", "a distinguished representation is sigma-selfdual");
    pub const SUPERCUSPIDAL_SELFDUAL: RuleId = RuleId(
        "supercuspidal-selfdual",
        "a sigma-selfdual supercuspidal modular representation is GL_n(k_0)-distinguished",
    );
    pub const LIFT_REDUCTION: RuleId = RuleId(
        "distinguished-lift-reduction",
        "the reduction of a distinguished lattice is distinguished",
    );
    pub const LEVI_TRIVIAL: RuleId = RuleId(
        "levi-parameter-trivial",
        "GL_u x GL_u-distinguished iff the parameter is trivial on k_u^x",
    );
    pub const LEVI_MODULAR_NONTRIVIAL: RuleId = RuleId(
        "levi-modular-nontrivial",
        "a modular parameter nontrivial on k_u^x excludes GL_u x GL_u-distinction",
    );
    pub const ODD_RANK: RuleId =
        RuleId("odd-rank-ramified", "no GL_u x GL_(u+1)-distinguished cuspidal for odd n > 1");
    pub const UNDECIDED: RuleId =
        RuleId("undecided", "no available criterion decides this modular case");
    pub const CENTRAL: RuleId =
        RuleId("central-character", "distinction forces c_pi to be trivial on F_0^x");
    pub const SIGN_MATCH: RuleId = RuleId(
        "sign-match",
        "the block swap acts on invariant forms by c_pi(varpi)",
    );
    pub const SIGN_MISMATCH: RuleId = RuleId(
        "sign-mismatch",
        "the block swap sign differs from c_pi(varpi)",
    );
    pub const LIFT_PADIC: RuleId = RuleId(
        "padic-lift",
        "a distinguished lift reduces to a distinguished representation",
    );
    pub const TWIST: RuleId =
        RuleId("tame-twist", "mu-distinction equals distinction of the twist by an extension of mu^-1");
}
