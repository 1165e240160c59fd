#![allow(dead_code)]

use veelab::catalog::{build_named, Params};
use veelab::geometry::VectorConfig;
use veelab::identity_field::CaseTag;

pub const POINTS: usize = 20;
pub const SEED: u64 = 7;
pub const TOL: f64 = 1e-8;

pub const F4_FAMILY: [&str; 5] = ["F4+", "F4_A1_1", "F4_A1_2", "F4_A2_1", "F4_A1sq"];
pub const BC_MS: [&[f64]; 5] = [&[1.0], &[1.0, 1.0], &[1.0, 1.0, 1.0], &[2.0, 1.0], &[3.0, 1.0, 2.0]];

#[derive(Debug, Clone)]
pub struct Case {
    pub label: String,
    pub name: &'static str,
    pub params: Params,
    /// Closed-form case covering this configuration, if any.
    pub tag: Option<CaseTag>,
}

impl Case {
    pub fn config(&self) -> VectorConfig {
        build_named(self.name, &self.params).unwrap()
    }
}

fn bcn(m: &[f64], q: f64, r: f64, s: f64) -> Params {
    Params::new().with_list("m", m).with("q", q).with("r", r).with("s", s)
}

/// Configurations on their commutativity loci.
pub fn solutions() -> Vec<Case> {
    let mut out = Vec::new();
    for name in F4_FAMILY {
        for (r, tag) in [(-2.0, CaseTag::F4RMinus2Q), (-4.0, CaseTag::F4RMinus4Q)] {
            out.push(Case {
                label: format!("{name} r={r}"),
                name,
                params: Params::new().with("r", r).with("q", 1.0),
                tag: Some(tag),
            });
        }
    }
    for (p, tag) in [(-3.0, CaseTag::G2PMinus3Q), (-9.0, CaseTag::G2PMinus9Q)] {
        out.push(Case { label: format!("G2+ p={p}"), name: "G2+", params: Params::new().with("p", p).with("q", 1.0), tag: Some(tag) });
    }
    for m in BC_MS {
        let total: f64 = m.iter().sum();
        let r = -8.0 - 2.0 * (total - 2.0);
        let tag = (m.len() >= 2).then_some(CaseTag::BCn);
        out.push(Case { label: format!("BCn m={m:?}"), name: "BCn", params: bcn(m, 1.0, r, 1.0), tag });
    }
    out
}

/// The same families off the loci. One-dimensional `BC_1` commutes for any
/// multiplicities and is left out.
pub fn controls() -> Vec<Case> {
    let mut out = Vec::new();
    for name in F4_FAMILY {
        out.push(Case { label: format!("{name} r=q=1"), name, params: Params::new().with("r", 1.0).with("q", 1.0), tag: None });
    }
    out.push(Case { label: "G2+ p=q=1".into(), name: "G2+", params: Params::new().with("p", 1.0).with("q", 1.0), tag: None });
    for m in BC_MS.iter().filter(|m| m.len() >= 2) {
        out.push(Case { label: format!("BCn m={m:?} q=r=s=1"), name: "BCn", params: bcn(m, 1.0, 1.0, 1.0), tag: None });
    }
    out
}

/// One configuration per closed-form case; BC1 carries arbitrary values.
pub fn closed_form_cases() -> Vec<Case> {
    let mut out: Vec<Case> = solutions().into_iter().filter(|c| c.tag.is_some()).collect();
    out.push(Case {
        label: "BC1 r=0.7 s=-1.3".into(),
        name: "BC1",
        params: Params::new().with("r", 0.7).with("s", -1.3),
        tag: Some(CaseTag::BC1),
    });
    out
}
