//! Six worked towers with their spanning-tree counts in factored form.

use num_bigint::BigUint;

use crate::analysis::EllFit;
use crate::io::{EdgeSpec, TaggedVoltage, TowerSpec, VoltageSpec};
use crate::omega::OmegaVerdict;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub spec: TowerSpec,
    /// Factored `kappa_n` for `n = 0, 1, ...`.
    pub expected: Vec<Vec<(u64, u32)>>,
    pub verdict: OmegaVerdict,
    /// The exact ell-part law, where it is on record.
    pub ell_fit: Option<EllFit>,
}

impl CorpusEntry {
    pub fn depth(&self) -> u32 {
        self.expected.len() as u32 - 1
    }

    pub fn expected_kappa(&self, n: u32) -> BigUint {
        self.expected[n as usize].iter().map(|&(p, e)| BigUint::from(p).pow(e)).product()
    }
}

fn edge(tail: &str, head: &str, voltage: VoltageSpec) -> EdgeSpec {
    EdgeSpec { tail: tail.into(), head: head.into(), voltage }
}

fn int(a: i64) -> VoltageSpec {
    VoltageSpec::integer(a)
}

fn bouquet(ell: u64, precision: u32, voltages: &[i64]) -> TowerSpec {
    TowerSpec {
        ell,
        precision,
        vertices: vec!["v".into()],
        edges: voltages.iter().map(|&a| edge("v", "v", int(a))).collect(),
    }
}

pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "bouquet3-ell5",
            spec: bouquet(5, 6, &[1, 1, 1]),
            expected: vec![
                vec![],
                vec![(3, 4), (5, 1)],
                vec![(3, 24), (5, 2)],
                vec![(3, 124), (5, 3)],
                vec![(3, 624), (5, 4)],
            ],
            verdict: OmegaVerdict::Bounded,
            ell_fit: Some(EllFit { mu: 0, lambda: 1, nu: 0, onset: 1 }),
        },
        CorpusEntry {
            name: "bouquet4-ell3-a",
            spec: bouquet(3, 6, &[1, 1, 2, 2]),
            expected: vec![
                vec![],
                vec![(2, 4), (3, 1)],
                vec![(2, 10), (3, 2), (17, 2)],
                vec![(2, 28), (3, 3), (17, 2), (53, 2), (109, 2)],
                vec![(2, 82), (3, 4), (17, 2), (53, 2), (109, 2), (2269, 2), (4373, 2), (19441, 2)],
            ],
            verdict: OmegaVerdict::Unbounded,
            ell_fit: Some(EllFit { mu: 0, lambda: 1, nu: 0, onset: 1 }),
        },
        CorpusEntry {
            name: "theta-ell5",
            spec: TowerSpec {
                ell: 5,
                precision: 6,
                vertices: vec!["v1".into(), "v2".into()],
                edges: vec![edge("v1", "v2", int(1)), edge("v2", "v1", int(2)), edge("v2", "v1", int(2))],
            },
            expected: vec![
                vec![(3, 1)],
                vec![(2, 4), (3, 1), (5, 1)],
                vec![(2, 24), (3, 1), (5, 2)],
                vec![(2, 124), (3, 1), (5, 3)],
                vec![(2, 624), (3, 1), (5, 4)],
            ],
            verdict: OmegaVerdict::Bounded,
            ell_fit: Some(EllFit { mu: 0, lambda: 1, nu: 0, onset: 1 }),
        },
        CorpusEntry {
            name: "bouquet4-ell3-b",
            spec: bouquet(3, 6, &[1, 2, 2, 2]),
            expected: vec![
                vec![],
                vec![(2, 4), (3, 1)],
                vec![(2, 4), (3, 2), (127, 2)],
                vec![(2, 4), (3, 3), (127, 2), (3295783, 2)],
                vec![(2, 4), (3, 4), (127, 2), (1621, 2), (3295783, 2), (22480434859526947, 2)],
            ],
            verdict: OmegaVerdict::Unbounded,
            ell_fit: Some(EllFit { mu: 0, lambda: 1, nu: 0, onset: 1 }),
        },
        CorpusEntry {
            name: "dipole4-ell2",
            spec: TowerSpec {
                ell: 2,
                precision: 8,
                vertices: vec!["v1".into(), "v2".into()],
                edges: (1..=4).map(|a| edge("v1", "v2", int(a))).collect(),
            },
            expected: vec![
                vec![(2, 2)],
                vec![(2, 5)],
                vec![(2, 12)],
                vec![(2, 17), (17, 2)],
                vec![(2, 22), (17, 2), (1217, 2)],
                vec![(2, 27), (17, 2), (257, 2), (1217, 2), (23041, 2)],
                vec![(2, 32), (17, 2), (257, 2), (1217, 2), (23041, 2), (158209, 2), (886538753, 2)],
            ],
            verdict: OmegaVerdict::Unbounded,
            ell_fit: Some(EllFit { mu: 0, lambda: 5, nu: 2, onset: 2 }),
        },
        CorpusEntry {
            name: "sqrt17-ell2",
            spec: TowerSpec {
                ell: 2,
                precision: 10,
                vertices: vec!["v".into()],
                edges: vec![
                    edge("v", "v", VoltageSpec::Tagged(TaggedVoltage::Sqrt { radicand: 17, branch: 1 })),
                    edge("v", "v", int(5)),
                ],
            },
            expected: vec![
                vec![],
                vec![(2, 2)],
                vec![(2, 5)],
                vec![(2, 12)],
                vec![(2, 17), (17, 2)],
                vec![(2, 22), (17, 2), (1217, 2)],
                vec![(2, 27), (17, 2), (257, 2), (1217, 2), (23041, 2)],
                vec![(2, 32), (17, 2), (257, 4), (1217, 2), (23041, 2), (1518337, 2), (27744257, 2)],
            ],
            verdict: OmegaVerdict::Inapplicable,
            ell_fit: Some(EllFit { mu: 0, lambda: 5, nu: -3, onset: 3 }),
        },
    ]
}

pub fn find(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}
