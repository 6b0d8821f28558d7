//! Instances, valuations, bundles and allocations.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest number of goods any instance may have (bundles are `u64` bitmasks).
pub const MAX_GOODS: usize = 64;

/// Largest number of goods a table valuation may range over (`2^m` entries).
pub const MAX_TABLE_GOODS: usize = 20;

/// A set of goods, stored as a bitmask over good indices `0..64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bundle(u64);

impl Bundle {
    pub const EMPTY: Bundle = Bundle(0);

    pub const fn from_mask(mask: u64) -> Self {
        Bundle(mask)
    }

    /// All goods `0..m`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_GOODS);
        if m >= 64 {
            Bundle(u64::MAX)
        } else {
            Bundle((1u64 << m) - 1)
        }
    }

    pub fn singleton(good: usize) -> Self {
        Bundle(1u64 << good)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, good: usize) -> bool {
        good < 64 && self.0 >> good & 1 == 1
    }

    pub fn insert(&mut self, good: usize) {
        self.0 |= 1u64 << good;
    }

    pub fn remove(&mut self, good: usize) {
        self.0 &= !(1u64 << good);
    }

    #[must_use]
    pub fn with(self, good: usize) -> Self {
        Bundle(self.0 | 1u64 << good)
    }

    #[must_use]
    pub fn without(self, good: usize) -> Self {
        Bundle(self.0 & !(1u64 << good))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Bundle) -> Bundle {
        Bundle(self.0 | other.0)
    }

    pub fn intersection(self, other: Bundle) -> Bundle {
        Bundle(self.0 & other.0)
    }

    pub fn difference(self, other: Bundle) -> Bundle {
        Bundle(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Bundle) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Bundle) -> bool {
        self.0 & other.0 == 0
    }

    /// Highest good index plus one (0 for the empty bundle).
    pub fn bound(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Good indices in increasing order.
    pub fn iter(self) -> BundleIter {
        BundleIter(self.0)
    }

    pub fn goods(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for Bundle {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut b = Bundle::EMPTY;
        for g in iter {
            b.insert(g);
        }
        b
    }
}

impl IntoIterator for Bundle {
    type Item = usize;
    type IntoIter = BundleIter;
    fn into_iter(self) -> BundleIter {
        self.iter()
    }
}

pub struct BundleIter(u64);

impl Iterator for BundleIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let g = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for BundleIter {}

impl fmt::Debug for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, g) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "g{}", g + 1)?;
        }
        f.write_str("}")
    }
}

/// A valuation oracle over the subsets of `m` goods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// `v(S) = sum of per-good values`.
    Additive(Vec<Rational>),
    /// `v(S) = min(cap, sum of per-good values)`.
    BudgetAdditive { values: Vec<Rational>, cap: Rational },
    /// Explicit monotone set function; entry `mask` holds `v(mask)`.
    Table(Vec<Rational>),
}

impl Valuation {
    pub fn additive_from_ints(values: &[i64]) -> Self {
        Valuation::Additive(values.iter().map(|&v| Rational::from(v)).collect())
    }

    /// Number of goods the valuation is defined over.
    pub fn goods(&self) -> usize {
        match self {
            Valuation::Additive(values) | Valuation::BudgetAdditive { values, .. } => values.len(),
            Valuation::Table(table) => table.len().trailing_zeros() as usize,
        }
    }

    /// Evaluates the valuation. The bundle must lie within the valuation's goods.
    pub fn value(&self, bundle: Bundle) -> Rational {
        match self {
            Valuation::Additive(values) => bundle.iter().map(|g| &values[g]).sum(),
            Valuation::BudgetAdditive { values, cap } => {
                let total: Rational = bundle.iter().map(|g| &values[g]).sum();
                total.min(cap.clone())
            }
            Valuation::Table(table) => table[bundle.mask() as usize].clone(),
        }
    }

    pub fn good_value(&self, good: usize) -> Rational {
        self.value(Bundle::singleton(good))
    }

    /// Per-good values when the valuation is additive on every bundle. A budget
    /// cap that never binds counts as additive; tables never do.
    pub fn additive_values(&self) -> Option<&[Rational]> {
        match self {
            Valuation::Additive(values) => Some(values),
            Valuation::BudgetAdditive { values, cap } => {
                let total: Rational = values.iter().sum();
                (total <= *cap).then_some(values.as_slice())
            }
            Valuation::Table(_) => None,
        }
    }
}

/// Agents, goods, valuations and optional positive entitlements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    m: usize,
    valuations: Vec<Valuation>,
    weights: Option<Vec<Rational>>,
}

impl Instance {
    /// Builds and validates an instance. Errors carry the offending field path.
    pub fn new(m: usize, valuations: Vec<Valuation>, weights: Option<Vec<Rational>>) -> Result<Self> {
        let n = valuations.len();
        if n == 0 {
            return Err(Error::invalid("valuations", "an instance needs at least one agent"));
        }
        if m > MAX_GOODS {
            return Err(Error::invalid("m", format!("at most {MAX_GOODS} goods are supported")));
        }
        for (i, v) in valuations.iter().enumerate() {
            validate_valuation(v, m, &format!("valuations[{i}]"))?;
        }
        if let Some(w) = &weights {
            if w.len() != n {
                return Err(Error::invalid(
                    "weights",
                    format!("expected {n} weights, found {}", w.len()),
                ));
            }
            if let Some(i) = w.iter().position(|x| !x.is_positive()) {
                return Err(Error::invalid(format!("weights[{i}]"), "weights must be strictly positive"));
            }
        }
        Ok(Instance {
            n,
            m,
            valuations,
            weights,
        })
    }

    /// Unweighted additive instance from integer value rows.
    pub fn additive(rows: &[Vec<i64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        Instance::new(m, rows.iter().map(|r| Valuation::additive_from_ints(r)).collect(), None)
    }

    /// Unweighted additive instance from rational value rows.
    pub fn additive_rational(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        Instance::new(m, rows.into_iter().map(Valuation::Additive).collect(), None)
    }

    pub fn with_weights(self, weights: Vec<Rational>) -> Result<Self> {
        Instance::new(self.m, self.valuations, Some(weights))
    }

    pub fn without_weights(self) -> Self {
        Instance { weights: None, ..self }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn valuations(&self) -> &[Valuation] {
        &self.valuations
    }

    pub fn valuation(&self, agent: usize) -> &Valuation {
        &self.valuations[agent]
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// The agent's weight, or 1 for unweighted instances.
    pub fn weight(&self, agent: usize) -> Rational {
        self.weights
            .as_ref()
            .map_or_else(Rational::one, |w| w[agent].clone())
    }

    pub fn all_goods(&self) -> Bundle {
        Bundle::full(self.m)
    }

    /// `v_agent(bundle)`.
    pub fn value_of(&self, agent: usize, bundle: Bundle) -> Result<Rational> {
        if agent >= self.n {
            return Err(Error::AgentOutOfRange { agent, n: self.n });
        }
        self.check_bundle(bundle)?;
        Ok(self.valuations[agent].value(bundle))
    }

    /// Unchecked evaluation for internal hot paths.
    pub(crate) fn v(&self, agent: usize, bundle: Bundle) -> Rational {
        self.valuations[agent].value(bundle)
    }

    pub(crate) fn check_bundle(&self, bundle: Bundle) -> Result<()> {
        if !bundle.is_subset(self.all_goods()) {
            return Err(Error::GoodOutOfRange {
                good: bundle.bound() - 1,
                m: self.m,
            });
        }
        Ok(())
    }

    /// Per-agent additive value rows, if every agent is additive.
    pub fn additive_rows(&self) -> Option<Vec<&[Rational]>> {
        self.valuations.iter().map(Valuation::additive_values).collect()
    }

    pub fn is_additive(&self) -> bool {
        self.additive_rows().is_some()
    }

    pub fn is_binary_additive(&self) -> bool {
        self.additive_rows().is_some_and(|rows| {
            rows.iter()
                .all(|r| r.iter().all(|v| v.is_zero() || v.is_one()))
        })
    }

    /// Keeps the listed agents and goods (in the given order), reindexing both.
    /// Only per-good (additive or budget-additive) valuations can be restricted.
    pub fn restrict(&self, agents: &[usize], goods: &[usize]) -> Result<Instance> {
        let valuations = agents
            .iter()
            .map(|&i| match &self.valuations[i] {
                Valuation::Additive(values) => {
                    Ok(Valuation::Additive(goods.iter().map(|&g| values[g].clone()).collect()))
                }
                Valuation::BudgetAdditive { values, cap } => Ok(Valuation::BudgetAdditive {
                    values: goods.iter().map(|&g| values[g].clone()).collect(),
                    cap: cap.clone(),
                }),
                Valuation::Table(_) => Err(Error::unsupported("restrict", "per-good valuations")),
            })
            .collect::<Result<Vec<_>>>()?;
        let weights = self
            .weights
            .as_ref()
            .map(|w| agents.iter().map(|&i| w[i].clone()).collect());
        Instance::new(goods.len(), valuations, weights)
    }
}

fn validate_valuation(v: &Valuation, m: usize, path: &str) -> Result<()> {
    let check_values = |values: &[Rational]| -> Result<()> {
        if values.len() != m {
            return Err(Error::invalid(
                format!("{path}.values"),
                format!("expected {m} values, found {}", values.len()),
            ));
        }
        if let Some(g) = values.iter().position(Rational::is_negative) {
            return Err(Error::invalid(format!("{path}.values[{g}]"), "values must be non-negative"));
        }
        Ok(())
    };
    match v {
        Valuation::Additive(values) => check_values(values),
        Valuation::BudgetAdditive { values, cap } => {
            check_values(values)?;
            if cap.is_negative() {
                return Err(Error::invalid(format!("{path}.cap"), "cap must be non-negative"));
            }
            Ok(())
        }
        Valuation::Table(table) => {
            if m > MAX_TABLE_GOODS {
                return Err(Error::invalid(
                    path,
                    format!("table valuations support at most {MAX_TABLE_GOODS} goods"),
                ));
            }
            if table.len() != 1usize << m {
                return Err(Error::invalid(
                    format!("{path}.values"),
                    format!("expected {} subset entries, found {}", 1usize << m, table.len()),
                ));
            }
            if !table[0].is_zero() {
                return Err(Error::invalid(format!("{path}.values[\"0\"]"), "the empty bundle must be worth 0"));
            }
            for mask in 1..table.len() {
                let mut rest = mask;
                while rest != 0 {
                    let g = rest.trailing_zeros();
                    rest &= rest - 1;
                    let sub = mask & !(1usize << g);
                    if table[sub] > table[mask] {
                        return Err(Error::invalid(
                            format!("{path}.values[\"{mask}\"]"),
                            format!(
                                "not monotone: v({}) = {} exceeds v({}) = {}",
                                Bundle::from_mask(sub as u64),
                                table[sub],
                                Bundle::from_mask(mask as u64),
                                table[mask]
                            ),
                        ));
                    }
                }
            }
            Ok(())
        }
    }
}

/// One bundle per agent; bundles are pairwise disjoint.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    bundles: Vec<Bundle>,
}

impl Allocation {
    pub fn new(bundles: Vec<Bundle>) -> Self {
        Allocation { bundles }
    }

    pub fn empty(n: usize) -> Self {
        Allocation {
            bundles: vec![Bundle::EMPTY; n],
        }
    }

    /// Builds an allocation from per-agent good lists.
    pub fn from_goods(goods: &[&[usize]]) -> Self {
        Allocation {
            bundles: goods.iter().map(|g| g.iter().copied().collect()).collect(),
        }
    }

    /// `owner[g]` = agent receiving good `g`.
    pub fn from_assignment(n: usize, owner: &[usize]) -> Self {
        let mut bundles = vec![Bundle::EMPTY; n];
        for (g, &i) in owner.iter().enumerate() {
            bundles[i].insert(g);
        }
        Allocation { bundles }
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> Bundle {
        self.bundles[agent]
    }

    pub fn bundles_mut(&mut self) -> &mut [Bundle] {
        &mut self.bundles
    }

    pub fn into_bundles(self) -> Vec<Bundle> {
        self.bundles
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn allocated(&self) -> Bundle {
        self.bundles.iter().fold(Bundle::EMPTY, |acc, b| acc.union(*b))
    }

    pub fn owner_of(&self, good: usize) -> Option<usize> {
        self.bundles.iter().position(|b| b.contains(good))
    }

    pub fn is_complete(&self, m: usize) -> bool {
        self.allocated() == Bundle::full(m)
    }

    /// Utilities `v_i(A_i)` for every agent.
    pub fn own_values(&self, inst: &Instance) -> Vec<Rational> {
        self.bundles
            .iter()
            .enumerate()
            .map(|(i, b)| inst.v(i, *b))
            .collect()
    }
}

impl fmt::Debug for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.bundles.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

/// Checks disjointness, index ranges and, optionally, completeness.
pub fn validate_allocation(inst: &Instance, alloc: &Allocation, require_complete: bool) -> Result<()> {
    if alloc.n() != inst.n() {
        return Err(Error::BundleCount {
            bundles: alloc.n(),
            n: inst.n(),
        });
    }
    let mut seen = Bundle::EMPTY;
    for (i, b) in alloc.bundles().iter().enumerate() {
        inst.check_bundle(*b)?;
        let clash = seen.intersection(*b);
        if let Some(good) = clash.iter().next() {
            let first = alloc.owner_of(good).unwrap_or(0);
            return Err(Error::OverlappingBundles {
                good,
                first,
                second: i,
            });
        }
        seen = seen.union(*b);
    }
    if require_complete {
        if let Some(good) = inst.all_goods().difference(seen).iter().next() {
            return Err(Error::Unallocated(good));
        }
    }
    Ok(())
}

/// Valuation classes recognised by [`classify_valuations`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValuationClass {
    BinaryAdditive,
    RestrictedAdditive,
    Identical,
    Additive,
    BinarySubmodularKnown,
}

impl ValuationClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ValuationClass::BinaryAdditive => "binary-additive",
            ValuationClass::RestrictedAdditive => "restricted-additive",
            ValuationClass::Identical => "identical",
            ValuationClass::Additive => "additive",
            ValuationClass::BinarySubmodularKnown => "binary-submodular-known",
        }
    }
}

impl fmt::Display for ValuationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Every class tag whose defining predicate holds for the whole profile.
///
/// Binary submodularity is only reported for valuations that are matroid-rank
/// by construction (0/1 additive, or 0/1 budget-additive with an integer cap);
/// tables are never tested.
pub fn classify_valuations(inst: &Instance) -> BTreeSet<ValuationClass> {
    let mut tags = BTreeSet::new();
    let is_01 = |values: &[Rational]| values.iter().all(|v| v.is_zero() || v.is_one());

    if let Some(rows) = inst.additive_rows() {
        tags.insert(ValuationClass::Additive);
        if rows.iter().all(|r| is_01(r)) {
            tags.insert(ValuationClass::BinaryAdditive);
        }
        let restricted = (0..inst.m()).all(|g| {
            let mut positive = rows.iter().map(|r| &r[g]).filter(|v| !v.is_zero());
            match positive.next() {
                None => true,
                Some(h) => positive.all(|v| v == h),
            }
        });
        if restricted {
            tags.insert(ValuationClass::RestrictedAdditive);
        }
    }

    let matroid_rank = inst.valuations().iter().all(|v| match v {
        Valuation::Additive(values) => is_01(values),
        Valuation::BudgetAdditive { values, cap } => is_01(values) && cap.is_integer(),
        Valuation::Table(_) => false,
    });
    if matroid_rank {
        tags.insert(ValuationClass::BinarySubmodularKnown);
    }

    if identical_valuations(inst) {
        tags.insert(ValuationClass::Identical);
    }
    tags
}

fn identical_valuations(inst: &Instance) -> bool {
    let first = inst.valuation(0);
    if inst.valuations().iter().all(|v| v == first) {
        return true;
    }
    // Structurally different oracles may still agree as set functions.
    if let Some(rows) = inst.additive_rows() {
        return rows.iter().all(|r| *r == rows[0]);
    }
    if inst.m() <= MAX_TABLE_GOODS {
        return (0..1u64 << inst.m()).all(|mask| {
            let b = Bundle::from_mask(mask);
            let v0 = first.value(b);
            inst.valuations().iter().all(|v| v.value(b) == v0)
        });
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn bundle_basics() {
        let b: Bundle = [0, 2, 5].into_iter().collect();
        assert_eq!(b.len(), 3);
        assert!(b.contains(2) && !b.contains(1));
        assert_eq!(b.goods(), vec![0, 2, 5]);
        assert_eq!(b.to_string(), "{g1,g3,g6}");
        assert_eq!(b.without(2).with(1).goods(), vec![0, 1, 5]);
        assert_eq!(Bundle::full(4).mask(), 0b1111);
        assert_eq!(Bundle::full(64).len(), 64);
        assert_eq!(b.bound(), 6);
    }

    #[test]
    fn value_of_additive_remark1() {
        let inst = Instance::additive(&[vec![1, 0, 0, 0], vec![1, 0, 0, 0]]).unwrap();
        let b = Bundle::from_iter([1, 2, 3]);
        assert_eq!(inst.value_of(1, b).unwrap(), 0);
        assert_eq!(inst.value_of(0, Bundle::full(4)).unwrap(), 1);
    }

    #[test]
    fn value_of_empty_is_zero_for_every_kind() {
        let table = Valuation::Table(vec![r(0, 1), r(1, 1), r(1, 1), r(2, 1)]);
        let budget = Valuation::BudgetAdditive {
            values: vec![r(3, 1), r(1, 2)],
            cap: r(1, 1),
        };
        let inst = Instance::new(2, vec![Valuation::additive_from_ints(&[4, 5]), budget, table], None).unwrap();
        for i in 0..3 {
            assert_eq!(inst.value_of(i, Bundle::EMPTY).unwrap(), 0);
        }
    }

    #[test]
    fn value_of_budget_additive_caps() {
        let v = Valuation::BudgetAdditive {
            values: vec![Rational::one(); 7],
            cap: Rational::from(2),
        };
        assert_eq!(v.value(Bundle::from_iter(0..5)), 2);
        assert_eq!(v.value(Bundle::singleton(3)), 1);
    }

    #[test]
    fn value_of_errors() {
        let inst = Instance::additive(&[vec![1, 2]]).unwrap();
        assert_eq!(
            inst.value_of(1, Bundle::EMPTY),
            Err(Error::AgentOutOfRange { agent: 1, n: 1 })
        );
        assert_eq!(
            inst.value_of(0, Bundle::singleton(2)),
            Err(Error::GoodOutOfRange { good: 2, m: 2 })
        );
    }

    #[test]
    fn instance_rejects_bad_inputs() {
        let bad_table = Valuation::Table(vec![r(1, 1), r(1, 1)]);
        let err = Instance::new(1, vec![bad_table], None).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { ref path, .. } if path == "valuations[0].values[\"0\"]"));

        let non_monotone = Valuation::Table(vec![r(0, 1), r(3, 1), r(1, 1), r(2, 1)]);
        let err = Instance::new(2, vec![non_monotone], None).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { ref path, .. } if path == "valuations[0].values[\"3\"]"));

        let err = Instance::additive(&[vec![1, -1]]).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { ref path, .. } if path == "valuations[0].values[1]"));

        let err = Instance::additive(&[vec![1, 1], vec![1, 1]])
            .unwrap()
            .with_weights(vec![r(1, 1), r(0, 1)])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { ref path, .. } if path == "weights[1]"));

        assert!(Instance::new(0, vec![], None).is_err());
    }

    #[test]
    fn validate_allocation_cases() {
        let inst = Instance::additive(&[vec![1, 0, 0, 0], vec![1, 0, 0, 0]]).unwrap();
        let ok = Allocation::from_goods(&[&[0], &[1, 2, 3]]);
        assert!(validate_allocation(&inst, &ok, true).is_ok());

        let overlap = Allocation::from_goods(&[&[0], &[0]]);
        assert_eq!(
            validate_allocation(&inst, &overlap, false),
            Err(Error::OverlappingBundles {
                good: 0,
                first: 0,
                second: 1
            })
        );

        let partial = Allocation::from_goods(&[&[0], &[]]);
        assert!(validate_allocation(&inst, &partial, false).is_ok());
        assert_eq!(validate_allocation(&inst, &partial, true), Err(Error::Unallocated(1)));

        let wrong_n = Allocation::from_goods(&[&[0]]);
        assert!(matches!(
            validate_allocation(&inst, &wrong_n, false),
            Err(Error::BundleCount { .. })
        ));
    }

    #[test]
    fn classify_binary_additive() {
        let inst = Instance::additive(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let tags = classify_valuations(&inst);
        for t in [
            ValuationClass::BinaryAdditive,
            ValuationClass::RestrictedAdditive,
            ValuationClass::Additive,
        ] {
            assert!(tags.contains(&t), "missing {t}");
        }
        assert!(!tags.contains(&ValuationClass::Identical));
    }

    #[test]
    fn classify_restricted_additive_two_agent_weighted_instance() {
        let inst = Instance::additive(&[vec![2, 2, 0, 0], vec![2, 2, 1, 0]]).unwrap();
        let tags = classify_valuations(&inst);
        assert!(tags.contains(&ValuationClass::RestrictedAdditive));
        assert!(!tags.contains(&ValuationClass::BinaryAdditive));

        let not_restricted = Instance::additive(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert!(!classify_valuations(&not_restricted).contains(&ValuationClass::RestrictedAdditive));
    }

    #[test]
    fn classify_budget_additive_is_matroid_rank_not_additive() {
        let budget = Valuation::BudgetAdditive {
            values: vec![Rational::one(); 7],
            cap: Rational::from(2),
        };
        let inst = Instance::new(
            7,
            vec![Valuation::additive_from_ints(&[1; 7]), budget],
            Some(vec![r(2, 1), r(5, 1)]),
        )
        .unwrap();
        let tags = classify_valuations(&inst);
        assert!(tags.contains(&ValuationClass::BinarySubmodularKnown));
        assert!(!tags.contains(&ValuationClass::Additive));
        assert!(inst.valuation(1).additive_values().is_none());
    }

    #[test]
    fn classify_identical_across_representations() {
        let table = Valuation::Table(vec![r(0, 1), r(1, 1), r(2, 1), r(3, 1)]);
        let inst = Instance::new(2, vec![Valuation::additive_from_ints(&[1, 2]), table], None).unwrap();
        assert!(classify_valuations(&inst).contains(&ValuationClass::Identical));
    }
}
