#![allow(dead_code)]

use adjointkit::pipeline::AdjointInstance;
use adjointkit::rational::{ivec, parse_rat};
use adjointkit::surface::ToricModel;
use adjointkit::QVec;

pub fn q(v: &[&str]) -> QVec {
    v.iter().map(|s| parse_rat(s).unwrap()).collect()
}

pub fn p1xp1(k: &[i64]) -> ToricModel {
    ToricModel::new(vec![[1, 0], [0, 1], [-1, 0], [0, -1]], Some(ivec(k))).unwrap()
}

/// The plane blown up at a point: index 1 is the exceptional curve.
pub fn blowup(k: &[i64]) -> ToricModel {
    ToricModel::new(vec![[1, 0], [1, 1], [0, 1], [-1, -1]], Some(ivec(k))).unwrap()
}

pub struct Case {
    pub name: &'static str,
    pub instance: AdjointInstance,
}

/// Toric instances for the end-to-end runs.
pub fn pipeline_corpus() -> Vec<Case> {
    vec![
        Case {
            name: "nef segment, one boundary",
            instance: AdjointInstance::new(p1xp1(&[0, 0, 1, 0]), vec![ivec(&[0, 0, 1, 0])]),
        },
        Case {
            name: "duplicate boundaries",
            instance: AdjointInstance::new(
                p1xp1(&[0, 0, 1, 0]),
                vec![ivec(&[0, 0, 1, 0]), ivec(&[0, 0, 1, 0])],
            ),
        },
        Case {
            name: "non-pseudo-effective vertex",
            instance: AdjointInstance::new(
                p1xp1(&[-1, 0, 0, 0]),
                vec![ivec(&[1, 0, 1, 1]), ivec(&[0, 0, 0, 0])],
            ),
        },
        Case {
            name: "contraction of the exceptional curve",
            instance: AdjointInstance::new(
                blowup(&[0, 1, 0, 1]),
                vec![ivec(&[0, 0, 0, 0]), ivec(&[1, 0, 1, 0])],
            ),
        },
        Case {
            name: "fractional boundaries",
            instance: AdjointInstance::new(
                p1xp1(&[0, 0, 0, 0]),
                vec![q(&["1/2", "0", "1/2", "0"]), q(&["0", "1/3", "0", "1"])],
            ),
        },
        Case {
            name: "three boundaries with a middle dependency",
            instance: AdjointInstance::new(
                p1xp1(&[0, 0, 1, 0]),
                vec![
                    ivec(&[0, 0, 0, 0]),
                    ivec(&[0, 0, 1, 0]),
                    q(&["0", "0", "1/2", "0"]),
                ],
            ),
        },
        Case {
            name: "three boundaries spanning a triangle",
            instance: AdjointInstance::new(
                blowup(&[0, 1, 0, 1]),
                vec![
                    ivec(&[0, 0, 0, 0]),
                    ivec(&[1, 0, 1, 0]),
                    ivec(&[0, 1, 0, 0]),
                ],
            ),
        },
    ]
}

/// Four boundaries at the corners of a square: the only shape that needs a
/// common point, and it takes four boundaries to get one.
pub fn split_case() -> Case {
    Case {
        name: "square of four boundaries",
        instance: AdjointInstance::new(
            p1xp1(&[0, 0, 1, 1]),
            vec![
                ivec(&[0, 0, 0, 0]),
                ivec(&[1, 0, 0, 0]),
                ivec(&[1, 1, 0, 0]),
                ivec(&[0, 1, 0, 0]),
            ],
        ),
    }
}
