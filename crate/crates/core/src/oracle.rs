//! Exact laws of small graphs by exhaustive enumeration.
//!
//! Probabilities are exact rationals. An `f64` is a dyadic rational, so the
//! coin weights `f(s)` enter without rounding and two laws that agree
//! mathematically compare equal.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coupling::DoublyLabeledTree;
use crate::edgestep::EdgeStepFunction;
use crate::error::{Error, Result};
use crate::graph::{CanonicalGraph, MultiGraph, VertexId};

/// Largest horizon either enumeration accepts.
pub const ENUMERATION_CAP: usize = 6;

pub type GraphLaw = BTreeMap<CanonicalGraph, BigRational>;

fn check_cap(t: u32) -> Result<()> {
    if t == 0 {
        return Err(Error::param("t", "horizon must be at least 1"));
    }
    if t as usize > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            t: t as usize,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite probability")
}

/// `(P[vertex-step], P[edge-step])` at time `s`.
fn coin(f: &EdgeStepFunction, s: u32) -> (BigRational, BigRational) {
    let p = rational(f.eval(s as u64));
    let q = BigRational::one() - &p;
    (p, q)
}

/// Preferential weights `deg(v) / 2t'` of every vertex of `g`.
fn preferential(g: &MultiGraph) -> Vec<(VertexId, BigRational)> {
    let total = BigInt::from(2 * g.t());
    g.degrees()
        .into_iter()
        .enumerate()
        .map(|(v, d)| (v as VertexId, BigRational::new(BigInt::from(d), total.clone())))
        .collect()
}

/// Exact law of `G_t(f)` over canonical graphs.
///
/// Steps are expanded one at a time; branches reaching the same canonical
/// graph are merged, since the future of the process depends on the graph
/// only.
pub fn enumerate_direct_law(f: &EdgeStepFunction, t: u32) -> Result<GraphLaw> {
    check_cap(t)?;
    let mut states: BTreeMap<CanonicalGraph, (MultiGraph, BigRational)> = BTreeMap::new();
    let g1 = MultiGraph::new_initial();
    states.insert(g1.canonical(), (g1, BigRational::one()));
    for s in 2..=t {
        let (pv, pe) = coin(f, s);
        let mut next: BTreeMap<CanonicalGraph, (MultiGraph, BigRational)> = BTreeMap::new();
        let mut add = |g: MultiGraph, p: BigRational| {
            next.entry(g.canonical())
                .and_modify(|e| e.1 += &p)
                .or_insert((g, p));
        };
        for (g, p) in states.values() {
            let weights = preferential(g);
            if !pv.is_zero() {
                for (v, w) in &weights {
                    let mut h = g.clone();
                    h.push_vertex_step(*v);
                    add(h, p * &pv * w);
                }
            }
            if !pe.is_zero() {
                for (a, wa) in &weights {
                    for (b, wb) in &weights {
                        let mut h = g.clone();
                        h.push_edge_step(*a, *b);
                        add(h, p * &pe * wa * wb);
                    }
                }
            }
        }
        states = next;
    }
    Ok(states.into_iter().map(|(k, (_, p))| (k, p)).collect())
}

/// Exact law of the collapse `f(T_t)` over canonical graphs.
///
/// Enumerates attachments `w`, ghost labels `ell` and keep/collapse outcomes
/// for every tree vertex, then collapses each labelled tree with the
/// production collapse map. A kept vertex never reads its ghost label, so
/// that label is summed out.
pub fn enumerate_collapse_law(f: &EdgeStepFunction, t: u32) -> Result<GraphLaw> {
    check_cap(t)?;
    // partial trees: (attach, ell, keep) plus the tree degrees
    struct Partial {
        attach: Vec<u32>,
        ell: Vec<u32>,
        keep: Vec<bool>,
        tree: MultiGraph,
        p: BigRational,
    }
    let mut partials = vec![Partial {
        attach: vec![0],
        ell: vec![0],
        keep: vec![true],
        tree: MultiGraph::new_initial(),
        p: BigRational::one(),
    }];
    for j in 2..=t {
        let (pk, pc) = coin(f, j);
        let mut next = Vec::new();
        for part in &partials {
            let weights = preferential(&part.tree);
            for (w, ww) in &weights {
                let mut tree = part.tree.clone();
                tree.push_vertex_step(*w);
                let base = &part.p * ww;
                let mut extend = |ell: u32, keep: bool, p: BigRational| {
                    let mut attach = part.attach.clone();
                    attach.push(*w);
                    let mut ells = part.ell.clone();
                    ells.push(ell);
                    let mut keeps = part.keep.clone();
                    keeps.push(keep);
                    next.push(Partial {
                        attach,
                        ell: ells,
                        keep: keeps,
                        tree: tree.clone(),
                        p,
                    });
                };
                if !pk.is_zero() {
                    extend(0, true, &base * &pk);
                }
                if !pc.is_zero() {
                    for (l, wl) in &weights {
                        extend(*l, false, &base * &pc * wl);
                    }
                }
            }
        }
        partials = next;
    }
    let mut law = GraphLaw::new();
    for part in partials {
        // U = 0 always survives and U = 1 only survives f = 1, which has no
        // collapse branches
        let u = part.keep.iter().map(|&k| if k { 0.0 } else { 1.0 }).collect();
        let tree = DoublyLabeledTree::from_parts(part.attach, part.ell, u)?;
        *law.entry(tree.collapse(f).canonical()).or_insert_with(BigRational::zero) += part.p;
    }
    Ok(law)
}

/// Total variation `(1/2) sum |a - b|` over the union of supports.
pub fn law_distance(a: &GraphLaw, b: &GraphLaw) -> BigRational {
    let zero = BigRational::zero();
    let mut sum = BigRational::zero();
    for (k, pa) in a {
        sum += (pa - b.get(k).unwrap_or(&zero)).abs();
    }
    for (k, pb) in b {
        if !a.contains_key(k) {
            sum += pb;
        }
    }
    sum / BigRational::from_integer(BigInt::from(2))
}

pub fn law_total(law: &GraphLaw) -> BigRational {
    law.values().fold(BigRational::zero(), |acc, p| acc + p)
}

pub fn to_f64(p: &BigRational) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}

/// Writes `probability<TAB>edge-list` lines sorted by edge list.
pub fn write_law<W: Write>(mut w: W, law: &GraphLaw) -> std::io::Result<()> {
    let mut rows: Vec<(String, &BigRational)> =
        law.iter().map(|(k, p)| (k.edge_list(), p)).collect();
    rows.sort();
    for (key, p) in rows {
        writeln!(w, "{:.17e}\t{}", to_f64(p), key)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tail_zero() -> EdgeStepFunction {
        EdgeStepFunction::constant(0.0).unwrap()
    }

    #[test]
    fn forced_laws() {
        let ba = EdgeStepFunction::ba();
        let law = enumerate_direct_law(&ba, 2).unwrap();
        assert_eq!(law.len(), 1);
        let (k, p) = law.iter().next().unwrap();
        assert_eq!(k.edges, vec![(1, 1), (1, 2)]);
        assert!(p.is_one());

        for t in [3, 4] {
            for law in [
                enumerate_direct_law(&tail_zero(), t).unwrap(),
                enumerate_collapse_law(&tail_zero(), t).unwrap(),
            ] {
                assert_eq!(law.len(), 1);
                let (k, p) = law.iter().next().unwrap();
                assert_eq!(k.births, vec![1]);
                assert_eq!(k.edges, vec![(1, 1); t as usize]);
                assert!(p.is_one());
            }
        }
    }

    #[test]
    fn third_vertex_attachment() {
        let law = enumerate_direct_law(&EdgeStepFunction::ba(), 3).unwrap();
        let p = |e: (u32, u32)| {
            law.iter()
                .find(|(k, _)| k.edges.contains(&e))
                .map(|(_, p)| p.clone())
                .unwrap()
        };
        assert_eq!(p((1, 3)), q(3, 4));
        assert_eq!(p((2, 3)), q(1, 4));
        assert_eq!(law, enumerate_collapse_law(&EdgeStepFunction::ba(), 3).unwrap());
    }

    #[test]
    fn laws_sum_to_one_and_agree() {
        for f in [
            EdgeStepFunction::constant(0.5).unwrap(),
            EdgeStepFunction::constant(0.3).unwrap(),
            EdgeStepFunction::log_class(1.0).unwrap(),
        ] {
            for t in 1..=4 {
                let a = enumerate_direct_law(&f, t).unwrap();
                let b = enumerate_collapse_law(&f, t).unwrap();
                assert!(law_total(&a).is_one());
                assert!(law_total(&b).is_one());
                assert!(law_distance(&a, &b).is_zero(), "{f} t={t}");
                for k in a.keys() {
                    assert_eq!(k.edges.len(), t as usize);
                    assert!(k.is_connected());
                }
            }
        }
    }

    #[test]
    fn distance_extremes() {
        let a = enumerate_direct_law(&EdgeStepFunction::ba(), 3).unwrap();
        assert!(law_distance(&a, &a).is_zero());
        let b = enumerate_direct_law(&tail_zero(), 3).unwrap();
        assert!(law_distance(&a, &b).is_one());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_direct_law(&EdgeStepFunction::ba(), 7),
            Err(Error::EnumerationCap { t: 7, cap: 6 })
        ));
        assert!(enumerate_collapse_law(&EdgeStepFunction::ba(), 7).is_err());
    }

    #[test]
    fn law_dump_is_sorted() {
        let law = enumerate_direct_law(&EdgeStepFunction::constant(0.5).unwrap(), 3).unwrap();
        let mut out = Vec::new();
        write_law(&mut out, &law).unwrap();
        let text = String::from_utf8(out).unwrap();
        let keys: Vec<&str> = text.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(keys.len(), law.len());
    }
}
