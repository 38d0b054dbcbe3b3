use std::collections::HashSet;

use num_traits::{One, Zero};

use super::{LeError, LeNetwork};
use crate::algebra::Rational;

struct Path {
    target: usize,
    vertices: HashSet<usize>,
    weight: Rational,
}

fn paths_from(net: &LeNetwork, start: usize, targets: &[usize]) -> Vec<Path> {
    let mut out = Vec::new();
    let mut stack = vec![start];
    walk(net, start, Rational::one(), &mut stack, targets, &mut out);
    out
}

fn walk(net: &LeNetwork, v: usize, weight: Rational, stack: &mut Vec<usize>, targets: &[usize], out: &mut Vec<Path>) {
    if let Some(&t) = targets.iter().find(|&&t| net.boundary(t) == v) {
        out.push(Path {
            target: t,
            vertices: stack.iter().copied().collect(),
            weight: weight.clone(),
        });
    }
    for &e in net.out_edges(v) {
        let edge = &net.edges[e];
        stack.push(edge.head);
        walk(net, edge.head, &weight * &edge.weight, stack, targets, out);
        stack.pop();
    }
}

/// Δ_J as a sum over families of vertex-disjoint paths from K = I∖J to
/// L = J∖I. Explicit enumeration, so only meant for small networks.
pub fn minor_by_paths(net: &LeNetwork, subset: &[usize]) -> Result<Rational, LeError> {
    let valid = subset.len() == net.k && subset.windows(2).all(|w| w[0] < w[1]) && subset.iter().all(|&j| (1..=net.n).contains(&j));
    if !valid {
        return Err(LeError::BadSubset(subset.to_vec()));
    }
    let sources: Vec<usize> = net.pivots.iter().copied().filter(|i| !subset.contains(i)).collect();
    let sinks: Vec<usize> = subset.iter().copied().filter(|j| !net.pivots.contains(j)).collect();
    let families: Vec<Vec<Path>> = sources.iter().map(|&i| paths_from(net, net.boundary(i), &sinks)).collect();
    let mut used_targets = HashSet::new();
    let mut used_vertices = HashSet::new();
    Ok(disjoint_sum(&families, 0, &mut used_targets, &mut used_vertices))
}

fn disjoint_sum(families: &[Vec<Path>], depth: usize, used_targets: &mut HashSet<usize>, used_vertices: &mut HashSet<usize>) -> Rational {
    if depth == families.len() {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for p in &families[depth] {
        if used_targets.contains(&p.target) || !p.vertices.is_disjoint(used_vertices) {
            continue;
        }
        used_targets.insert(p.target);
        used_vertices.extend(p.vertices.iter().copied());
        let rest = disjoint_sum(families, depth + 1, used_targets, used_vertices);
        if !rest.is_zero() {
            total += &p.weight * rest;
        }
        for v in &p.vertices {
            used_vertices.remove(v);
        }
        used_targets.remove(&p.target);
    }
    total
}
