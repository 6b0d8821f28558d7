//! Named instances with known outcomes and a suite that re-derives each outcome.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::enumeration::{count_satisfying_with, CountOptions};
use crate::error::{Error, Result};
use crate::fairness::{verify_witness, Property, Witness};
use crate::io::{allocation_to_value, instance_to_json};
use crate::model::{Allocation, Bundle, Instance, Valuation};
use crate::rational::Rational;
use crate::wefx_po::wefx_po_binary;

/// What a fixture is known to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    ExactCount { property: Property, value: u64 },
    Nonexistence { property: Property },
    UniqueAllocation { property: Property, allocation: Allocation },
}

/// One allocation of the EFX+ counterexample with an agent who still envies
/// another after adding any single good of the other's bundle (0-based agents).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvyRow {
    pub allocation: Allocation,
    pub envious: usize,
    pub envied: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub id: &'static str,
    pub instance: Instance,
    pub expectation: Expectation,
    /// Per-allocation envy witnesses; only the EFX+ counterexample has them.
    pub envy_table: Vec<EnvyRow>,
}

pub const FIXTURE_IDS: [&str; 11] = [
    "remark1_n2",
    "remark1_n3",
    "remark1_n4",
    "prop4_n3_m2",
    "prop5_n3",
    "thm6_n3",
    "thm9_identical_n3",
    "prop11_wefx",
    "prop12_wwefx",
    "prop13_wwefx",
    "prop15_efxplus",
];

/// Epsilon of the restricted additive WWEFX counterexample; valid in (0, 1/14).
pub fn prop13_epsilon() -> Rational {
    Rational::new(1, 20)
}

fn additive(rows: &[Vec<i64>]) -> Instance {
    Instance::additive(rows).expect("fixture rows are valid")
}

fn weighted(inst: Instance, weights: Vec<Rational>) -> Instance {
    inst.with_weights(weights).expect("fixture weights are positive")
}

fn count(property: Property, value: u64) -> Expectation {
    Expectation::ExactCount { property, value }
}

/// Diagonal-plus-shared instance: agent `i` values `g_i` at `own`, the
/// trailing `shared` goods at 1 and the rest at 0.
fn diagonal(n: usize, own: i64, shared: usize) -> Instance {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n + shared).map(|j| if j == i { own } else if j >= n { 1 } else { 0 }).collect())
        .collect();
    additive(&rows)
}

pub fn paper_instance(id: &str) -> Result<Fixture> {
    let plain = |instance: Instance, expectation: Expectation| Fixture {
        id: FIXTURE_IDS.iter().find(|&&k| k == id).copied().expect("known id"),
        instance,
        expectation,
        envy_table: Vec::new(),
    };
    Ok(match id {
        "remark1_n2" => plain(additive(&[vec![1, 0, 0, 0], vec![1, 0, 0, 0]]), count(Property::Efx, 2)),
        "remark1_n3" => plain(
            additive(&[
                vec![281, 472, 47, 660, 36],
                vec![569, 936, 173, 343, 135],
                vec![522, 641, 52, 793, 571],
            ]),
            count(Property::Efx, 3),
        ),
        "remark1_n4" => plain(
            additive(&[
                vec![95, 114, 196, 171, 871, 667],
                vec![254, 973, 200, 240, 907, 536],
                vec![3, 910, 444, 627, 730, 693],
                vec![382, 651, 425, 182, 548, 811],
            ]),
            count(Property::Efx, 4),
        ),
        "prop4_n3_m2" => plain(additive(&[vec![1, 1], vec![1, 1], vec![1, 1]]), count(Property::Efx, 6)),
        "prop5_n3" => plain(diagonal(3, 2, 1), count(Property::Efx, 3)),
        "thm6_n3" => plain(diagonal(3, 3, 2), count(Property::Efx, 9)),
        "thm9_identical_n3" => plain(additive(&vec![vec![1, 1, 0, 0, 0]; 3]), count(Property::Efx, 6)),
        "prop11_wefx" => plain(
            weighted(additive(&[vec![1, 1, 1], vec![1, 0, 0]]), vec![Rational::new(9, 10), Rational::new(1, 10)]),
            Expectation::UniqueAllocation {
                property: Property::Wefx,
                allocation: Allocation::from_goods(&[&[1, 2], &[0]]),
            },
        ),
        "prop12_wwefx" => {
            let ones = vec![Rational::one(); 7];
            let inst = Instance::new(
                7,
                vec![
                    Valuation::Additive(ones.clone()),
                    Valuation::BudgetAdditive { values: ones, cap: Rational::from(2) },
                ],
                Some(vec![Rational::from(2), Rational::from(5)]),
            )?;
            plain(inst, Expectation::Nonexistence { property: Property::Wwefx })
        }
        "prop13_wwefx" => {
            let half = Rational::new(1, 2);
            let eps = prop13_epsilon();
            plain(
                weighted(additive(&[vec![2, 2, 0, 0], vec![2, 2, 1, 0]]), vec![&half + &eps, half - eps]),
                Expectation::Nonexistence { property: Property::Wwefx },
            )
        }
        "prop15_efxplus" => Fixture {
            id: "prop15_efxplus",
            instance: prop15_realization(),
            expectation: Expectation::Nonexistence { property: Property::EfxPlus },
            envy_table: prop15_envy_table(),
        },
        _ => return Err(Error::UnknownFixture(id.to_string())),
    })
}

pub fn all_fixtures() -> Vec<Fixture> {
    FIXTURE_IDS.iter().map(|id| paper_instance(id).expect("listed id")).collect()
}

/// Per agent, the two-good bundles from least to most preferred (0-based goods).
pub const PROP15_CHAINS: [[(usize, usize); 6]; 3] = [
    [(2, 3), (0, 1), (1, 2), (0, 3), (1, 3), (0, 2)],
    [(0, 3), (1, 2), (0, 1), (1, 3), (2, 3), (0, 2)],
    [(0, 2), (1, 3), (0, 3), (1, 2), (2, 3), (0, 1)],
];

fn pair(a: usize, b: usize) -> Bundle {
    Bundle::singleton(a).with(b)
}

/// `v(S) = 10 |S|`, plus the bundle's 1-based chain position when `|S| = 2`.
pub fn prop15_realization() -> Instance {
    let valuations = PROP15_CHAINS
        .iter()
        .map(|chain| {
            let table = (0u64..16)
                .map(|mask| {
                    let s = Bundle::from_mask(mask);
                    let rank = chain.iter().position(|&(a, b)| pair(a, b) == s).map_or(0, |p| p + 1);
                    Rational::from(10 * s.len() as i64 + rank as i64)
                })
                .collect();
            Valuation::Table(table)
        })
        .collect();
    Instance::new(4, valuations, None).expect("monotone tables")
}

/// Checks that larger bundles are worth strictly more and that each agent's
/// two-good bundles follow its chain strictly.
pub fn validate_ordinal_realization(inst: &Instance, chains: &[[(usize, usize); 6]]) -> Result<()> {
    if inst.n() != chains.len() || inst.m() != 4 {
        return Err(Error::Precondition("realization shape differs from the rankings".into()));
    }
    let subsets: Vec<Bundle> = (0u64..16).map(Bundle::from_mask).collect();
    for (i, chain) in chains.iter().enumerate() {
        let v = |s: Bundle| inst.v(i, s);
        for &a in &subsets {
            for &b in &subsets {
                if a.len() > b.len() && v(a) <= v(b) {
                    return Err(Error::Invariant(format!("agent {i}: {a} is not above smaller {b}")));
                }
            }
        }
        for w in chain.windows(2) {
            let (lo, hi) = (pair(w[0].0, w[0].1), pair(w[1].0, w[1].1));
            if v(lo) >= v(hi) {
                return Err(Error::Invariant(format!("agent {i}: {lo} is not below {hi}")));
            }
        }
    }
    Ok(())
}

/// The 36 allocations with one two-good bundle, each with its envy witness.
pub fn prop15_envy_table() -> Vec<EnvyRow> {
    // (bundles as 1-based goods per agent, envious, envied), 1-based.
    #[rustfmt::skip]
    const ROWS: [([&[usize]; 3], usize, usize); 36] = [
        ([&[1, 2], &[3], &[4]], 2, 1), ([&[1, 2], &[4], &[3]], 2, 1),
        ([&[1, 3], &[2], &[4]], 2, 1), ([&[1, 3], &[4], &[2]], 2, 1),
        ([&[1, 4], &[2], &[3]], 3, 1), ([&[1, 4], &[3], &[2]], 3, 1),
        ([&[2, 3], &[1], &[4]], 3, 1), ([&[2, 3], &[4], &[1]], 3, 1),
        ([&[2, 4], &[1], &[3]], 2, 1), ([&[2, 4], &[3], &[1]], 2, 1),
        ([&[3, 4], &[1], &[2]], 2, 1), ([&[3, 4], &[2], &[1]], 2, 1),
        ([&[3], &[1, 2], &[4]], 3, 2), ([&[4], &[1, 2], &[3]], 3, 2),
        ([&[2], &[1, 3], &[4]], 1, 2), ([&[4], &[1, 3], &[2]], 1, 2),
        ([&[2], &[1, 4], &[3]], 1, 2), ([&[3], &[1, 4], &[2]], 1, 2),
        ([&[1], &[2, 3], &[4]], 1, 2), ([&[4], &[2, 3], &[1]], 1, 2),
        ([&[1], &[2, 4], &[3]], 1, 2), ([&[3], &[2, 4], &[1]], 1, 2),
        ([&[1], &[3, 4], &[2]], 3, 2), ([&[2], &[3, 4], &[1]], 3, 2),
        ([&[3], &[4], &[1, 2]], 2, 3), ([&[4], &[3], &[1, 2]], 2, 3),
        ([&[2], &[4], &[1, 3]], 1, 3), ([&[4], &[2], &[1, 3]], 1, 3),
        ([&[2], &[3], &[1, 4]], 1, 3), ([&[3], &[2], &[1, 4]], 1, 3),
        ([&[1], &[4], &[2, 3]], 1, 3), ([&[4], &[1], &[2, 3]], 1, 3),
        ([&[1], &[3], &[2, 4]], 1, 3), ([&[3], &[1], &[2, 4]], 1, 3),
        ([&[1], &[2], &[3, 4]], 2, 3), ([&[2], &[1], &[3, 4]], 2, 3),
    ];
    ROWS.iter()
        .map(|(bundles, envious, envied)| EnvyRow {
            allocation: Allocation::new(bundles.iter().map(|b| b.iter().map(|g| g - 1).collect()).collect()),
            envious: envious - 1,
            envied: envied - 1,
        })
        .collect()
}

/// Whether the row's envious agent violates EFX+ towards the envied agent.
pub fn verify_envy_row(inst: &Instance, row: &EnvyRow) -> Result<bool> {
    for g in row.allocation.bundle(row.envied).iter() {
        let w = Witness { envier: row.envious, envied: row.envied, good: Some(g) };
        if verify_witness(inst, &row.allocation, &Property::EfxPlus, &w)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteRow {
    pub id: String,
    pub passed: bool,
    pub expected: String,
    pub measured: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "id": r.id,
                    "passed": r.passed,
                    "expected": r.expected,
                    "measured": r.measured,
                })
            })
            .collect();
        serde_json::json!({ "all_passed": self.all_passed(), "rows": rows })
    }

    pub fn to_table(&self) -> String {
        let headers = ["fixture", "result", "expected", "measured"];
        let cells: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                let verdict = if r.passed { "pass" } else { "FAIL" };
                [r.id.clone(), verdict.to_string(), r.expected.clone(), r.measured.clone()]
            })
            .collect();
        let mut widths = headers.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let mut line = |cols: [&str; 4]| {
            let padded: Vec<String> = cols.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(headers);
        for row in &cells {
            line([&row[0], &row[1], &row[2], &row[3]]);
        }
        out
    }
}

fn row(id: impl Into<String>, passed: bool, expected: impl Into<String>, measured: impl Into<String>) -> SuiteRow {
    SuiteRow { id: id.into(), passed, expected: expected.into(), measured: measured.into() }
}

/// Re-derives every fixture's expectation; failures become rows, not errors.
pub fn verify_paper_suite() -> SuiteReport {
    verify_paper_suite_with(&CountOptions::default())
}

pub fn verify_paper_suite_with(opts: &CountOptions) -> SuiteReport {
    let mut rows = Vec::new();
    for fixture in all_fixtures() {
        rows.extend(verify_fixture(&fixture, opts));
    }
    SuiteReport { rows }
}

/// Report rows for one fixture: its expectation, then any extra checks.
pub fn verify_fixture(fixture: &Fixture, opts: &CountOptions) -> Vec<SuiteRow> {
    let inst = &fixture.instance;
    let id = fixture.id;
    let mut rows = Vec::new();
    let counted = |property: &Property, limit: usize| {
        count_satisfying_with(inst, property, &CountOptions { witness_limit: limit, ..opts.clone() })
    };
    match &fixture.expectation {
        Expectation::ExactCount { property, value } => rows.push(match counted(property, 0) {
            Ok(c) => row(id, c.satisfying == *value, format!("{property} count {value}"), c.satisfying.to_string()),
            Err(e) => row(id, false, format!("{property} count {value}"), format!("error: {e}")),
        }),
        Expectation::Nonexistence { property } => rows.push(match counted(property, 1) {
            Ok(c) => row(
                id,
                c.satisfying == 0,
                format!("no {property} among {}", c.total_checked),
                c.satisfying.to_string(),
            ),
            Err(e) => row(id, false, format!("no {property}"), format!("error: {e}")),
        }),
        Expectation::UniqueAllocation { property, allocation } => {
            rows.push(match counted(property, 2) {
                Ok(c) => {
                    let found: Vec<String> = c.witnesses.iter().map(ToString::to_string).collect();
                    let unique = c.satisfying == 1 && c.witnesses.first() == Some(allocation);
                    row(id, unique, format!("only {allocation} is {property}"), found.join(" "))
                }
                Err(e) => row(id, false, format!("only {allocation}"), format!("error: {e}")),
            });
            if inst.is_binary_additive() {
                let sub = format!("{id}/wefx_po_binary");
                rows.push(match wefx_po_binary(inst) {
                    Ok(a) => row(sub, &a == allocation, allocation.to_string(), a.to_string()),
                    Err(e) => row(sub, false, allocation.to_string(), format!("error: {e}")),
                });
            }
        }
    }
    if id == "prop13_wwefx" {
        let w = inst.weights().expect("weighted");
        let eps = prop13_epsilon();
        let ok = eps.is_positive()
            && eps < Rational::new(1, 14)
            && &w[0] / &w[1] > Rational::one()
            && &w[1] / &w[0] > Rational::new(3, 4);
        rows.push(row(
            format!("{id}/epsilon_window"),
            ok,
            "0 < eps < 1/14, w1/w2 > 1, w2/w1 > 3/4",
            format!("eps = {eps}, w1/w2 = {}, w2/w1 = {}", &w[0] / &w[1], &w[1] / &w[0]),
        ));
    }
    if !fixture.envy_table.is_empty() {
        let ordinal = validate_ordinal_realization(inst, &PROP15_CHAINS);
        rows.push(row(
            format!("{id}/ordinal_rankings"),
            ordinal.is_ok(),
            "consistent",
            ordinal.err().map_or_else(|| "consistent".to_string(), |e| e.to_string()),
        ));
        let total = fixture.envy_table.len();
        let confirmed = fixture
            .envy_table
            .iter()
            .filter(|r| verify_envy_row(inst, r).unwrap_or(false))
            .count();
        rows.push(row(
            format!("{id}/envy_table"),
            confirmed == total,
            format!("{total}/{total} rows"),
            format!("{confirmed}/{total} rows"),
        ));
    }
    rows
}

impl Fixture {
    pub fn expectation_json(&self) -> serde_json::Value {
        match &self.expectation {
            Expectation::ExactCount { property, value } => {
                serde_json::json!({ "kind": "exact_count", "property": property.to_string(), "value": value })
            }
            Expectation::Nonexistence { property } => {
                serde_json::json!({ "kind": "nonexistence", "property": property.to_string() })
            }
            Expectation::UniqueAllocation { property, allocation } => serde_json::json!({
                "kind": "unique_allocation",
                "property": property.to_string(),
                "allocation": allocation_to_value(allocation),
            }),
        }
    }
}

/// Writes one instance document per fixture as `<dir>/<id>.json`.
pub fn export_fixtures(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for fixture in all_fixtures() {
        let path = dir.join(format!("{}.json", fixture.id));
        let mut text = instance_to_json(&fixture.instance);
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}
