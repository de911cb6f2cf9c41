//! Diagram lookup against the Gram form and against actual group orders.

use std::collections::BTreeMap;

use coxeter_nl::classify::{finite_type_decomposition, is_finite_coxeter, FiniteType};
use coxeter_nl::coxgraph::CoxeterGraph;
use coxeter_nl::georep::gram_matrix;
use coxeter_nl::metricspace::{cayley_closure, MAX_CAYLEY_NODES};

fn all_graphs(n: usize, labels: &[u32]) -> impl Iterator<Item = CoxeterGraph> + '_ {
    let ps: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = labels.len().pow(ps.len() as u32);
    (0..total).map(move |mut code| {
        let mut edges = Vec::new();
        for &(i, j) in &ps {
            let m = labels[code % labels.len()];
            code /= labels.len();
            if m != 0 {
                edges.push((i, j, m));
            }
        }
        CoxeterGraph::numbered(n, &edges).unwrap()
    })
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn order(t: &FiniteType) -> u64 {
    match *t {
        FiniteType::A(n) => factorial(n as u64 + 1),
        FiniteType::B(n) => (1u64 << n) * factorial(n as u64),
        FiniteType::D(n) => (1u64 << (n - 1)) * factorial(n as u64),
        FiniteType::E6 => 51_840,
        FiniteType::E7 => 2_903_040,
        FiniteType::E8 => 696_729_600,
        FiniteType::F4 => 1152,
        FiniteType::H3 => 120,
        FiniteType::H4 => 14_400,
        FiniteType::I2(m) => 2 * m as u64,
    }
}

#[test]
fn lookup_matches_positive_definite_gram() {
    let mut finite = 0;
    let mut total = 0;
    for n in 1..=4 {
        for g in all_graphs(n, &[0, 2, 3, 4, 5, 6, 7]) {
            let lookup = finite_type_decomposition(&g).unwrap().is_some();
            let positive = gram_matrix(&g).min_eigenvalue() > 1e-9;
            assert_eq!(lookup, positive, "{g}");
            assert_eq!(is_finite_coxeter(&g, 1e-9).unwrap(), lookup);
            finite += lookup as usize;
            total += 1;
        }
    }
    assert_eq!(total, 1 + 7 + 343 + 117_649);
    assert!(finite > 0);
}

#[test]
fn lookup_orders_match_enumerated_groups() {
    // One graph per multiset of types.
    let mut seen: BTreeMap<Vec<String>, CoxeterGraph> = BTreeMap::new();
    for n in 1..=4 {
        for g in all_graphs(n, &[0, 2, 3, 4, 5, 6]) {
            if let Some(types) = finite_type_decomposition(&g).unwrap() {
                let mut key: Vec<String> = types.iter().map(|t| t.to_string()).collect();
                key.sort();
                seen.entry(key).or_insert(g);
            }
        }
    }
    let mut checked = 0;
    for (key, g) in &seen {
        let types = finite_type_decomposition(g).unwrap().unwrap();
        let expected: u64 = types.iter().map(order).product();
        if expected as usize > MAX_CAYLEY_NODES {
            continue;
        }
        let found = cayley_closure(g).unwrap();
        assert_eq!(found.len() as u64, expected, "{key:?}");
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} type combinations checked");
}

#[test]
fn larger_catalogue_members() {
    let path = |labels: &[u32]| {
        let n = labels.len() + 1;
        let mut edges: Vec<_> = labels.iter().enumerate().map(|(i, &m)| (i, i + 1, m)).collect();
        for i in 0..n {
            for j in i + 2..n {
                edges.push((i, j, 2));
            }
        }
        CoxeterGraph::numbered(n, &edges).unwrap()
    };
    let decompose = |g: &CoxeterGraph| finite_type_decomposition(g).unwrap();

    assert_eq!(decompose(&path(&[3; 7])), Some(vec![FiniteType::A(8)]));
    assert_eq!(decompose(&path(&[4, 3, 3, 3, 3])), Some(vec![FiniteType::B(6)]));
    assert_eq!(decompose(&path(&[3, 3, 3, 4])), Some(vec![FiniteType::B(5)]));
    assert_eq!(decompose(&path(&[3, 4, 3])), Some(vec![FiniteType::F4]));
    assert_eq!(decompose(&path(&[3, 3, 5])), Some(vec![FiniteType::H4]));
    assert_eq!(decompose(&path(&[3, 3, 3, 5])), None);
    assert_eq!(decompose(&path(&[3, 4, 3, 3])), None);
    assert_eq!(decompose(&path(&[4, 3, 4])), None);

    // Branch at vertex 2 with arms of lengths 2, 1 and k.
    let branched = |k: usize| {
        let n = 4 + k;
        let mut bonds = vec![(0, 1), (1, 2), (2, 3)];
        let mut prev = 2;
        for v in 4..n {
            bonds.push((prev, v));
            prev = v;
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let m = if bonds.contains(&(i, j)) { 3 } else { 2 };
                edges.push((i, j, m));
            }
        }
        CoxeterGraph::numbered(n, &edges).unwrap()
    };
    assert_eq!(decompose(&branched(2)), Some(vec![FiniteType::E6]));
    assert_eq!(decompose(&branched(3)), Some(vec![FiniteType::E7]));
    assert_eq!(decompose(&branched(4)), Some(vec![FiniteType::E8]));
    assert_eq!(decompose(&branched(5)), None);
    for g in [branched(2), branched(3), branched(4)] {
        assert!(gram_matrix(&g).min_eigenvalue() > 1e-9);
    }
    assert!(gram_matrix(&branched(5)).min_eigenvalue() <= 1e-9);
}
