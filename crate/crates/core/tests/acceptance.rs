//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines always reach standard output.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use efxlab::approx::quarter_wefx_run;
use efxlab::construct::{
    alg1_n_plus_2, bobw_lottery, cut_and_choose_efx, leximax_cut_efx_plus, weighted_leximinpp_optimal,
};
use efxlab::enumeration::allocation_at;
use efxlab::fixtures::{paper_instance, verify_envy_row};
use efxlab::gen::{random_additive, random_binary_weighted, random_monotone_table, random_weighted_additive};
use efxlab::reduction::{min_exponent_k, reduce_with, unenvied_profile, BipartiteInput};
use efxlab::wefx_po::wefx_po_binary;
use efxlab::{
    build_join_graph, check, count_satisfying, count_satisfying_with, eliminate_envy_cycles, envy_graph,
    min_count_search, Allocation, Bundle, CountOptions, Instance, Property, Rational,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn holds(inst: &Instance, alloc: &Allocation, prop: &Property) -> Result<bool, String> {
    check(inst, alloc, prop).map(|r| r.holds).map_err(|e| e.to_string())
}

fn random_complete(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Allocation {
    let total = (n as u64).pow(m as u32);
    allocation_at(n, m, rng.random_range(0..total))
}

fn exact_counts() -> Outcome {
    let cases = [
        ("remark1_n2", 16, 2),
        ("remark1_n3", 243, 3),
        ("remark1_n4", 4096, 4),
        ("prop5_n3", 81, 3),
        ("thm6_n3", 243, 9),
        ("thm9_identical_n3", 243, 6),
        ("prop4_n3_m2", 9, 6),
    ];
    let mut seen = Vec::new();
    for (id, total, expected) in cases {
        let f = paper_instance(id).map_err(|e| e.to_string())?;
        let c = count_satisfying(&f.instance, &Property::Efx).map_err(|e| e.to_string())?;
        ensure(c.total_checked == total && c.satisfying == expected, || {
            format!("{id}: {} of {} EFX, expected {expected} of {total}", c.satisfying, c.total_checked)
        })?;
        seen.push(format!("{id}={}", c.satisfying));
    }
    Ok(seen.join(" "))
}

fn nonexistence() -> Outcome {
    for (id, prop, total) in [
        ("prop12_wwefx", Property::Wwefx, 128),
        ("prop13_wwefx", Property::Wwefx, 16),
        ("prop15_efxplus", Property::EfxPlus, 81),
    ] {
        let f = paper_instance(id).map_err(|e| e.to_string())?;
        let c = count_satisfying(&f.instance, &prop).map_err(|e| e.to_string())?;
        ensure(c.satisfying == 0 && c.total_checked == total, || {
            format!("{id}: {} of {} satisfy {prop}", c.satisfying, c.total_checked)
        })?;
    }
    let f = paper_instance("prop15_efxplus").map_err(|e| e.to_string())?;
    let confirmed = f.envy_table.iter().filter(|r| verify_envy_row(&f.instance, r).unwrap_or(false)).count();
    ensure(confirmed == 36 && f.envy_table.len() == 36, || format!("{confirmed}/36 envy rows confirmed"))?;
    Ok("0 WWEFX of 128 and of 16, 0 EFX+ of 81, 36/36 envy rows".into())
}

fn uniqueness() -> Outcome {
    let f = paper_instance("prop11_wefx").map_err(|e| e.to_string())?;
    let expected = Allocation::from_goods(&[&[1, 2], &[0]]);
    let mut found = Vec::new();
    for index in 0..8 {
        let a = allocation_at(2, 3, index);
        if holds(&f.instance, &a, &Property::Wefx)? {
            found.push(a);
        }
    }
    ensure(found == [expected.clone()], || format!("WEFX allocations: {found:?}"))?;
    let solved = wefx_po_binary(&f.instance).map_err(|e| e.to_string())?;
    ensure(solved == expected, || format!("wefx_po_binary returned {solved}"))?;
    Ok(format!("unique WEFX allocation {expected}, returned by wefx_po_binary"))
}

fn algorithm_one() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 2..=6 {
        for trial in 0..1000 {
            let inst = random_additive(&mut rng, n, n + 2, 100);
            let mut order: Vec<usize> = (0..n).collect();
            order.rotate_left(trial % n);
            let a = alg1_n_plus_2(&inst, &order).map_err(|e| e.to_string())?;
            ensure(a.is_complete(n + 2) && holds(&inst, &a, &Property::Efx)?, || {
                format!("n={n} trial {trial}: {a} is not a complete EFX allocation")
            })?;
        }
    }
    Ok("5000/5000 EFX".into())
}

fn theorem_eight() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let runs = 500;
    for trial in 0..runs {
        let n = rng.random_range(1..=5);
        let m = rng.random_range(0..=8);
        let inst = random_binary_weighted(&mut rng, n, m, 6);
        let lex = weighted_leximinpp_optimal(&inst).map_err(|e| e.to_string())?;
        let wpo = wefx_po_binary(&inst).map_err(|e| e.to_string())?;
        for (name, a) in [("leximin++", &lex), ("matching", &wpo)] {
            ensure(a.is_complete(m), || format!("trial {trial}: {name} output {a} is incomplete"))?;
            for prop in [Property::Wefx, Property::Po] {
                ensure(holds(&inst, a, &prop)?, || format!("trial {trial}: {name} output {a} fails {prop}"))?;
            }
        }
    }
    Ok(format!("{runs}/{runs} WEFX and PO for both methods"))
}

fn theorem_ten() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let quarter = Property::AlphaWefx(Rational::new(1, 4));
    let (runs, mut fallbacks) = (1000, 0);
    for trial in 0..runs {
        let m = rng.random_range(1..=12);
        let inst = random_weighted_additive(&mut rng, 2, m, 50, 10);
        let run = quarter_wefx_run(&inst).map_err(|e| e.to_string())?;
        fallbacks += usize::from(run.fallback_used());
        ensure(holds(&inst, &run.allocation, &quarter)?, || {
            format!("trial {trial}: {} is not 1/4-WEFX", run.allocation)
        })?;
    }
    ensure(fallbacks == 0, || format!("fallback fired {fallbacks} times"))?;
    Ok(format!("{runs}/{runs} pass 1/4-WEFX, fallback fired 0 times"))
}

fn two_agent_procedures() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for trial in 0..300 {
        let m = rng.random_range(1..=5);
        let inst = random_monotone_table(&mut rng, 2, m, 4);
        for cutter in 0..2 {
            let a = leximax_cut_efx_plus(&inst, cutter).map_err(|e| e.to_string())?;
            ensure(holds(&inst, &a, &Property::EfxPlus)?, || format!("trial {trial}: leximax {a} fails EFX+"))?;
        }
        let c = count_satisfying(&inst, &Property::EfxPlus).map_err(|e| e.to_string())?;
        ensure(c.satisfying >= 2, || format!("trial {trial}: only {} EFX+ allocations", c.satisfying))?;
    }
    for trial in 0..300 {
        let m = rng.random_range(1..=10);
        let inst = random_additive(&mut rng, 2, m, 30);
        for cutter in 0..2 {
            let a = cut_and_choose_efx(&inst, cutter).map_err(|e| e.to_string())?;
            ensure(holds(&inst, &a, &Property::Efx)?, || format!("trial {trial}: cut-and-choose {a} fails EFX"))?;
        }
        let c = count_satisfying(&inst, &Property::Efx).map_err(|e| e.to_string())?;
        ensure(c.satisfying >= 2, || format!("trial {trial}: only {} EFX allocations", c.satisfying))?;
        let lottery = bobw_lottery(&inst).map_err(|e| e.to_string())?;
        let mass: Rational = lottery.entries.iter().map(|e| &e.probability).sum();
        ensure(mass == 1 && lottery.is_ex_ante_ef(&inst), || format!("trial {trial}: lottery is not ex-ante EF"))?;
        for e in &lottery.entries {
            ensure(holds(&inst, &e.allocation, &Property::Efx)?, || format!("trial {trial}: lottery support fails EFX"))?;
        }
    }
    Ok("300 monotone EFX+ runs, 300 additive EFX runs, >= 2 allocations each, ex-ante EF lotteries".into())
}

fn permanent(g: &BipartiteInput) -> u64 {
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0;
    loop {
        total += u64::from(perm.iter().enumerate().all(|(x, &y)| g.has_edge(x, y)));
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return total;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn gadget() -> Outcome {
    let opts = CountOptions::default();
    let mut checked = 0;
    for mask in 0u32..16 {
        let g = BipartiteInput::new(2, (0..4).filter(|b| mask >> b & 1 == 1).map(|b| (b / 2, b % 2))).unwrap();
        if !g.isolated_left().is_empty() {
            continue;
        }
        let report = reduce_with(&g, &opts).map_err(|e| e.to_string())?;
        ensure(report.matchings == permanent(&g), || format!("n=2 mask {mask:04b}: {report:?}"))?;
        let a = unenvied_profile(&g).map_err(|e| e.to_string())?;
        let k = min_exponent_k(2).map_err(|e| e.to_string())?;
        let p: u64 = a.iter().enumerate().map(|(i, &c)| c * (i as u64).pow(k)).sum();
        ensure(Some(p) == report.efx_count, || format!("n=2 mask {mask:04b}: sum a_i i^k = {p}, P = {:?}", report.efx_count))?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..24 {
        let edges: Vec<(usize, usize)> = (0..9).filter(|_| rng.random_bool(0.55)).map(|b| (b / 3, b % 3)).collect();
        let g = BipartiteInput::new(3, edges).unwrap();
        let report = reduce_with(&g, &opts).map_err(|e| e.to_string())?;
        ensure(report.matchings == permanent(&g), || format!("n=3 trial {trial}: {report:?} vs {}", permanent(&g)))?;
    }
    Ok(format!("{checked} two-node graphs and 24 random three-node graphs match the permanent"))
}

fn join_graph() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut edges = 0;
    for trial in 0..100 {
        let n = 2 + trial % 2;
        let inst = random_additive(&mut rng, n, n + 2, 40);
        let jg = build_join_graph(&inst).map_err(|e| e.to_string())?;
        ensure(jg.components_have_enough_edges(), || format!("trial {trial}: component with |E| < |N|"))?;
        for (&(i, j), a) in jg.edges() {
            let sizes: Vec<usize> = a.bundles().iter().map(|b| b.len()).collect();
            let shape = if i == j {
                sizes[i] == 3 && sizes.iter().enumerate().all(|(k, &s)| k == i || s == 1)
            } else {
                let fav = |b: Bundle| b.iter().map(|g| inst.value_of(j, Bundle::singleton(g)).unwrap()).max();
                sizes[i] == 2
                    && sizes[j] == 2
                    && sizes.iter().enumerate().all(|(k, &s)| k == i || k == j || s == 1)
                    && fav(a.bundle(j)) >= fav(a.bundle(i))
            };
            ensure(shape && a.is_complete(n + 2) && holds(&inst, a, &Property::Efx)?, || {
                format!("trial {trial}: edge ({i},{j}) witness {a} fails its criterion")
            })?;
            edges += 1;
        }
    }
    Ok(format!("100 instances, {edges} edge witnesses re-verified"))
}

fn conjecture_search() -> Outcome {
    let opts = CountOptions { threads: 4, ..CountOptions::default() };
    let mut mins = Vec::new();
    for n in 2..=4 {
        let r = min_count_search(n, n + 2, &Property::Efx, 500, 2024 + n as u64, 1000, &opts).map_err(|e| e.to_string())?;
        ensure(r.min_count >= n as u64, || format!("n={n}: min count {} below n", r.min_count))?;
        mins.push(format!("n={n}: {}", r.min_count));
    }
    Ok(mins.join(", "))
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cases = 600;
    for trial in 0..cases {
        let n = rng.random_range(2..=4);
        let m = rng.random_range(0..=6);
        let inst = random_additive(&mut rng, n, m, 6);
        let a = random_complete(&mut rng, n, m);

        let (ef, efx, ef1, efxp) = (
            holds(&inst, &a, &Property::Ef)?,
            holds(&inst, &a, &Property::Efx)?,
            holds(&inst, &a, &Property::Ef1)?,
            holds(&inst, &a, &Property::EfxPlus)?,
        );
        ensure(efx == efxp, || format!("trial {trial}: EFX {efx} vs EFX+ {efxp} on {a}"))?;
        ensure((!ef || efx) && (!efx || ef1), || format!("trial {trial}: implication chain broken on {a}"))?;

        let w = Rational::from(rng.random_range(1..=5) as i64);
        let equal = inst.clone().with_weights(vec![w; n]).unwrap();
        ensure(holds(&equal, &a, &Property::Wefx)? == efx, || format!("trial {trial}: WEFX differs from EFX"))?;

        let before = a.own_values(&inst);
        let after = eliminate_envy_cycles(&inst, &a);
        let now = after.own_values(&inst);
        ensure(envy_graph(&inst, &after).is_acyclic(), || format!("trial {trial}: cycles remain"))?;
        ensure(before.iter().zip(&now).all(|(b, c)| c >= b), || format!("trial {trial}: a utility dropped"))?;
        ensure(!efx || holds(&inst, &after, &Property::Efx)?, || format!("trial {trial}: EFX lost"))?;

        let prop = [Property::Efx, Property::Ef1, Property::EfxPlus][trial % 3].clone();
        let serial = count_satisfying(&inst, &prop).map_err(|e| e.to_string())?;
        let threads = rng.random_range(2..=5);
        let opts = CountOptions { threads, witness_limit: 16, ..CountOptions::default() };
        let parallel = count_satisfying_with(&inst, &prop, &opts).map_err(|e| e.to_string())?;
        ensure(serial == parallel, || format!("trial {trial}: parallel count differs with {threads} threads"))?;
    }
    Ok(format!("{cases} cases per suite, 0 violations"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("exact-count fixtures", exact_counts),
        ("nonexistence fixtures", nonexistence),
        ("uniqueness fixture", uniqueness),
        ("n+2 greedy algorithm soundness", algorithm_one),
        ("WEFX and PO, both methods", theorem_eight),
        ("1/4-WEFX for two agents", theorem_ten),
        ("two-agent EFX+, cut-and-choose, lottery", two_agent_procedures),
        ("perfect-matching gadget", gadget),
        ("join-graph component edges", join_graph),
        ("minimum-count search", conjecture_search),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2} s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.2} s)", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
