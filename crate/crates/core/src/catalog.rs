//! Built-in models with pinned expectations for regression runs.

use serde::Serialize;

use crate::conjecture::{ConjectureReport, LuptonStatus};
use crate::dga::SullivanPresentation;
use crate::parser::parse_model;

/// The parts of a report an entry pins down; unset fields are not compared.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub formal_dimension: Option<u32>,
    pub dims: Option<Vec<usize>>,
    pub e: Option<u32>,
    pub lupton: Option<LuptonStatus>,
    pub witness_power: Option<u32>,
    pub dim_h: Option<usize>,
}

impl Expected {
    /// Descriptions of every pinned field that the report contradicts.
    pub fn mismatches(&self, r: &ConjectureReport) -> Vec<String> {
        let mut out = Vec::new();
        let mut cmp = |what: &str, want: String, got: String| {
            if want != got {
                out.push(format!("{what}: expected {want}, got {got}"));
            }
        };
        if let Some(n) = self.formal_dimension {
            cmp(
                "formal dimension",
                n.to_string(),
                r.formal_dimension.to_string(),
            );
        }
        if let Some(d) = &self.dims {
            cmp("dims", format!("{d:?}"), format!("{:?}", r.dims));
        }
        if let Some(e) = self.e {
            cmp("e", e.to_string(), r.e.to_string());
        }
        if let Some(s) = self.lupton {
            cmp("lupton", format!("{s:?}"), format!("{:?}", r.lupton_status));
        }
        if let Some(h) = self.witness_power {
            cmp(
                "witness power",
                h.to_string(),
                r.truncated_poly_witness
                    .as_ref()
                    .map_or("none".into(), |w| w.power.to_string()),
            );
        }
        if let Some(h) = self.dim_h {
            cmp("dim H", h.to_string(), r.hilali.dim_h.to_string());
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub source: &'static str,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn presentation(&self) -> SullivanPresentation {
        parse_model(self.source)
            .expect("catalog sources parse")
            .with_name(self.id)
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            id: "sphere-S2",
            description: "2-sphere: Λ(x₂, y₃), dy = x²",
            source: "generator x 2\ngenerator y 3\nd y = x^2\n",
            expected: Expected {
                formal_dimension: Some(2),
                dims: Some(vec![1, 0, 1]),
                e: Some(1),
                lupton: Some(LuptonStatus::HoldsViaDims),
                witness_power: Some(1),
                dim_h: Some(2),
            },
        },
        CatalogEntry {
            id: "sphere-S3",
            description: "3-sphere: Λ(x₃), d = 0",
            source: "generator x 3\n",
            expected: Expected {
                formal_dimension: Some(3),
                dims: Some(vec![1, 0, 0, 1]),
                e: Some(1),
                lupton: Some(LuptonStatus::HoldsViaDims),
                witness_power: Some(1),
                dim_h: Some(2),
            },
        },
        CatalogEntry {
            id: "product-S3xS3",
            description: "S³ × S³: Λ(x₃, y₃), d = 0",
            source: "generator x 3\ngenerator y 3\n",
            expected: Expected {
                formal_dimension: Some(6),
                dims: Some(vec![1, 0, 0, 2, 0, 0, 1]),
                e: Some(2),
                lupton: Some(LuptonStatus::HoldsViaDims),
                witness_power: None,
                dim_h: Some(4),
            },
        },
        CatalogEntry {
            id: "product-S2xS2",
            description: "S² × S²: Λ(x₂, y₂, z₃, w₃), dz = x², dw = y²",
            source: "generator x 2\ngenerator y 2\ngenerator z 3\ngenerator w 3\nd z = x^2\nd w = y^2\n",
            expected: Expected {
                formal_dimension: Some(4),
                dims: Some(vec![1, 0, 2, 0, 1]),
                e: Some(2),
                lupton: Some(LuptonStatus::HoldsViaDims),
                witness_power: None,
                dim_h: Some(4),
            },
        },
        CatalogEntry {
            id: "cp2",
            description: "complex projective plane: Λ(x₂, y₅), dy = x³",
            source: "generator x 2\ngenerator y 5\nd y = x^3\n",
            expected: Expected {
                formal_dimension: Some(4),
                dims: Some(vec![1, 0, 1, 0, 1]),
                e: Some(2),
                lupton: Some(LuptonStatus::HoldsViaTruncatedPoly),
                witness_power: Some(2),
                dim_h: Some(3),
            },
        },
        CatalogEntry {
            id: "cp3",
            description: "complex projective 3-space: Λ(x₂, y₇), dy = x⁴",
            source: "generator x 2\ngenerator y 7\nd y = x^4\n",
            expected: Expected {
                formal_dimension: Some(6),
                dims: Some(vec![1, 0, 1, 0, 1, 0, 1]),
                e: Some(3),
                lupton: Some(LuptonStatus::HoldsViaTruncatedPoly),
                witness_power: Some(3),
                dim_h: Some(4),
            },
        },
        CatalogEntry {
            id: "E1",
            description: "coformal, cocycle generators all even: Λ(x₂, y₂, z₃, w₃, t₃), dz = x², dw = xy, dt = y²",
            source: "generator x 2\ngenerator y 2\ngenerator z 3\ngenerator w 3\ngenerator t 3\n\
                     d z = x^2\nd w = x*y\nd t = y^2\n",
            expected: Expected {
                formal_dimension: Some(7),
                dims: Some(vec![1, 0, 2, 0, 0, 2, 0, 1]),
                e: Some(3),
                lupton: Some(LuptonStatus::HoldsViaDims),
                witness_power: None,
                dim_h: Some(6),
            },
        },
        CatalogEntry {
            id: "odd-kernel",
            description: "coformal with odd cocycle generators: Λ(x₃, y₃, z₅), dz = xy",
            source: "generator x 3\ngenerator y 3\ngenerator z 5\nd z = x*y\n",
            expected: Expected {
                formal_dimension: Some(11),
                dims: Some(vec![1, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 1]),
                e: Some(3),
                lupton: Some(LuptonStatus::HoldsViaDims),
                witness_power: None,
                dim_h: Some(6),
            },
        },
        CatalogEntry {
            id: "S3xCP2",
            description: "S³ × CP², length 3 with an odd cocycle: Λ(x₂, a₃, y₅), dy = x³",
            source: "generator x 2\ngenerator a 3\ngenerator y 5\nd y = x^3\n",
            expected: Expected {
                formal_dimension: Some(7),
                dims: Some(vec![1, 0, 1, 1, 1, 1, 0, 1]),
                e: Some(3),
                lupton: Some(LuptonStatus::HoldsViaDims),
                witness_power: None,
                dim_h: Some(6),
            },
        },
    ]
}

pub fn find(id: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::validate;
    use std::collections::HashSet;

    #[test]
    fn ids_unique_and_valid() {
        let entries = catalog();
        let ids: HashSet<_> = entries.iter().map(|e| e.id).collect();
        assert_eq!(ids.len(), entries.len());
        for e in &entries {
            assert!(validate(&e.presentation()).ok(), "{}", e.id);
        }
    }

    #[test]
    fn entries_meet_expectations() {
        for e in catalog() {
            let a = crate::conjecture::analyze(&e.presentation(), None).unwrap();
            let m = e.expected.mismatches(&a.report);
            assert!(m.is_empty(), "{}: {m:?}", e.id);
            assert!(!a.report.violated(), "{}", e.id);
        }
    }
}
