//! JSON instance and allocation documents.
//!
//! Instance document:
//!
//! ```json
//! {"n": 2, "m": 3, "weights": ["2", "5"] | null,
//!  "valuations": [
//!    {"kind": "additive", "values": ["1", "0", "1/2"]},
//!    {"kind": "budget_additive", "values": [1, 1, 1], "cap": "2"},
//!    {"kind": "table", "values": {"0": "0", "1": "1", ...}}
//!  ]}
//! ```
//!
//! Table keys are subset bitmasks written as decimal strings; every one of the
//! `2^m` subsets must be present. Allocation document: `{"bundles": [[0, 2], [1]]}`.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{Allocation, Bundle, Instance, Valuation, MAX_TABLE_GOODS};
use crate::rational::Rational;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    n: usize,
    m: usize,
    #[serde(default)]
    weights: Option<Vec<Rational>>,
    valuations: Vec<ValuationDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ValuationDoc {
    Additive {
        values: Vec<Rational>,
    },
    BudgetAdditive {
        values: Vec<Rational>,
        cap: Rational,
    },
    Table {
        #[serde(serialize_with = "serialize_table")]
        values: BTreeMap<String, Rational>,
    },
}

/// Writes table entries in numeric key order rather than string order.
fn serialize_table<S: Serializer>(table: &BTreeMap<String, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut entries: Vec<(u64, &Rational)> = table
        .iter()
        .map(|(k, v)| (k.parse().unwrap_or(u64::MAX), v))
        .collect();
    entries.sort_by_key(|(k, _)| *k);
    let mut map = s.serialize_map(Some(entries.len()))?;
    for (k, v) in entries {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocationDoc {
    bundles: Vec<Vec<usize>>,
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if doc.valuations.len() != doc.n {
        return Err(Error::invalid(
            "valuations",
            format!("n = {} but {} valuations are listed", doc.n, doc.valuations.len()),
        ));
    }
    let valuations = doc
        .valuations
        .into_iter()
        .enumerate()
        .map(|(i, v)| valuation_from_doc(v, doc.m, i))
        .collect::<Result<Vec<_>>>()?;
    Instance::new(doc.m, valuations, doc.weights)
}

fn valuation_from_doc(doc: ValuationDoc, m: usize, agent: usize) -> Result<Valuation> {
    Ok(match doc {
        ValuationDoc::Additive { values } => Valuation::Additive(values),
        ValuationDoc::BudgetAdditive { values, cap } => Valuation::BudgetAdditive { values, cap },
        ValuationDoc::Table { values } => {
            let path = format!("valuations[{agent}].values");
            if m > MAX_TABLE_GOODS {
                return Err(Error::invalid(
                    path,
                    format!("table valuations support at most {MAX_TABLE_GOODS} goods"),
                ));
            }
            let size = 1usize << m;
            let mut table: Vec<Option<Rational>> = vec![None; size];
            for (key, value) in values {
                let mask: usize = key
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("{path}[\"{key}\"]"), "key is not a bitmask integer"))?;
                if mask >= size {
                    return Err(Error::invalid(
                        format!("{path}[\"{key}\"]"),
                        format!("bitmask exceeds the {m} goods of the instance"),
                    ));
                }
                if table[mask].replace(value).is_some() {
                    return Err(Error::invalid(format!("{path}[\"{key}\"]"), "duplicate subset key"));
                }
            }
            let table = table
                .into_iter()
                .enumerate()
                .map(|(mask, v)| {
                    v.ok_or_else(|| Error::invalid(format!("{path}[\"{mask}\"]"), "table is missing this subset"))
                })
                .collect::<Result<Vec<_>>>()?;
            Valuation::Table(table)
        }
    })
}

fn instance_doc(inst: &Instance) -> InstanceDoc {
    InstanceDoc {
        n: inst.n(),
        m: inst.m(),
        weights: inst.weights().map(<[Rational]>::to_vec),
        valuations: inst
            .valuations()
            .iter()
            .map(|v| match v {
                Valuation::Additive(values) => ValuationDoc::Additive { values: values.clone() },
                Valuation::BudgetAdditive { values, cap } => ValuationDoc::BudgetAdditive {
                    values: values.clone(),
                    cap: cap.clone(),
                },
                Valuation::Table(table) => ValuationDoc::Table {
                    values: table
                        .iter()
                        .enumerate()
                        .map(|(mask, v)| (mask.to_string(), v.clone()))
                        .collect(),
                },
            })
            .collect(),
    }
}

/// Serializes an instance as a pretty-printed document.
pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&instance_doc(inst)).expect("instance documents always serialize")
}

/// The instance document as a JSON value, for embedding in reports.
pub fn instance_to_value(inst: &Instance) -> serde_json::Value {
    serde_json::to_value(instance_doc(inst)).expect("instance documents always serialize")
}

/// Parses an allocation document; bundles are validated against `inst` when given.
pub fn parse_allocation(text: &str, inst: Option<&Instance>) -> Result<Allocation> {
    let doc: AllocationDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let mut bundles = Vec::with_capacity(doc.bundles.len());
    for goods in &doc.bundles {
        let mut b = Bundle::EMPTY;
        for &g in goods {
            let m = inst.map_or(crate::model::MAX_GOODS, Instance::m);
            if g >= m {
                return Err(Error::GoodOutOfRange { good: g, m });
            }
            if b.contains(g) {
                return Err(Error::Malformed(format!("good {g} listed twice in one bundle")));
            }
            b.insert(g);
        }
        bundles.push(b);
    }
    let alloc = Allocation::new(bundles);
    if let Some(inst) = inst {
        crate::model::validate_allocation(inst, &alloc, false)?;
    }
    Ok(alloc)
}

pub fn allocation_to_value(alloc: &Allocation) -> serde_json::Value {
    serde_json::to_value(AllocationDoc {
        bundles: alloc.bundles().iter().map(|b| b.goods()).collect(),
    })
    .expect("allocation documents always serialize")
}

pub fn allocation_to_json(alloc: &Allocation) -> String {
    allocation_to_value(alloc).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const REMARK1_N2: &str = r#"{
        "n": 2, "m": 4, "weights": null,
        "valuations": [
            {"kind": "additive", "values": [1, 0, 0, 0]},
            {"kind": "additive", "values": ["1", "0", "0", "0"]}
        ]
    }"#;

    #[test]
    fn parses_plain_additive_document() {
        let inst = parse_instance(REMARK1_N2).unwrap();
        assert_eq!((inst.n(), inst.m()), (2, 4));
        assert!(!inst.is_weighted());
    }

    #[test]
    fn parses_weighted_budget_document() {
        let text = r#"{"n": 2, "m": 7, "weights": ["2", "5"], "valuations": [
            {"kind": "additive", "values": [1,1,1,1,1,1,1]},
            {"kind": "budget_additive", "values": [1,1,1,1,1,1,1], "cap": "2"}]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.weights().unwrap(), &[Rational::from(2), Rational::from(5)]);
        assert_eq!(inst.value_of(1, Bundle::full(7)).unwrap(), 2);
    }

    #[test]
    fn rejects_nonzero_empty_table_entry() {
        let text = r#"{"n": 1, "m": 1, "valuations": [
            {"kind": "table", "values": {"0": "1", "1": "2"}}]}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { ref path, .. } if path.ends_with("[\"0\"]")), "{err}");
    }

    #[test]
    fn rejects_missing_table_entry_and_bad_keys() {
        let missing = r#"{"n": 1, "m": 2, "valuations": [
            {"kind": "table", "values": {"0": "0", "1": "1", "3": "2"}}]}"#;
        let err = parse_instance(missing).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { ref path, .. } if path == "valuations[0].values[\"2\"]"));

        let bad_key = r#"{"n": 1, "m": 1, "valuations": [
            {"kind": "table", "values": {"0": "0", "x": "1"}}]}"#;
        assert!(parse_instance(bad_key).is_err());
    }

    #[test]
    fn rejects_structural_mismatches() {
        assert!(matches!(parse_instance("{"), Err(Error::Malformed(_))));
        let wrong_n = r#"{"n": 3, "m": 1, "valuations": [{"kind": "additive", "values": [1]}]}"#;
        assert!(matches!(parse_instance(wrong_n), Err(Error::InvalidInstance { .. })));
        let wrong_m = r#"{"n": 1, "m": 2, "valuations": [{"kind": "additive", "values": [1]}]}"#;
        assert!(matches!(parse_instance(wrong_m), Err(Error::InvalidInstance { .. })));
    }

    #[test]
    fn table_serializes_in_numeric_key_order() {
        let table: Vec<Rational> = (0..16).map(Rational::from).collect();
        let inst = Instance::new(4, vec![Valuation::Table(table)], None).unwrap();
        let text = instance_to_json(&inst);
        let p2 = text.find("\"2\":").unwrap();
        let p10 = text.find("\"10\":").unwrap();
        assert!(p2 < p10);
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn allocation_documents() {
        let inst = parse_instance(REMARK1_N2).unwrap();
        let alloc = parse_allocation(r#"{"bundles": [[0], [1, 2, 3]]}"#, Some(&inst)).unwrap();
        assert_eq!(alloc, Allocation::from_goods(&[&[0], &[1, 2, 3]]));
        assert_eq!(allocation_to_json(&alloc), r#"{"bundles":[[0],[1,2,3]]}"#);
        assert!(parse_allocation(r#"{"bundles": [[0], [0]]}"#, Some(&inst)).is_err());
        assert!(parse_allocation(r#"{"bundles": [[9], []]}"#, Some(&inst)).is_err());
    }
}
