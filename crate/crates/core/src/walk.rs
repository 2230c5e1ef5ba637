//! Seeded random walks over the move graph.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::KrGraph;
use crate::surgery::{self, MoveInstance};

/// Applies `steps` moves, each chosen uniformly among those applicable.
/// Stops early at a graph without moves. The same seed gives the same walk.
pub fn random_walk(g: &KrGraph, steps: usize, seed: u64) -> Result<KrGraph> {
    Ok(random_walk_with_moves(g, steps, seed)?.0)
}

pub fn random_walk_with_moves(g: &KrGraph, steps: usize, seed: u64) -> Result<(KrGraph, Vec<MoveInstance>)> {
    let report = g.validate();
    if !report.ok() {
        return Err(Error::InvalidGraph(report));
    }
    if !g.is_generic_unchecked() {
        return Err(Error::NonGeneric("interior heights repeat".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = g.clone();
    let mut moves = Vec::new();
    for _ in 0..steps {
        let Some((m, next)) = surgery::candidates(&current).choose(&mut rng).cloned() else {
            break;
        };
        moves.push(m);
        current = next;
    }
    Ok((current, moves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn zero_steps_is_identity() {
        let g = pants([h(1, 5), h(3, 10), h(1, 2), h(4, 5)]);
        assert_eq!(random_walk(&g, 0, 7).unwrap(), g);
    }

    #[test]
    fn walks_are_reproducible_and_keep_invariants() {
        let g = pants([h(1, 5), h(3, 10), h(1, 2), h(4, 5)]);
        let a = random_walk_with_moves(&g, 50, 11).unwrap();
        assert_eq!(a, random_walk_with_moves(&g, 50, 11).unwrap());
        assert_eq!(a.0.derived_invariants().unwrap(), g.derived_invariants().unwrap());
        let mut replay = g.clone();
        for m in &a.1 {
            replay = surgery::apply_move(&replay, m).unwrap();
        }
        assert_eq!(replay, a.0);
    }

    #[test]
    fn stuck_walk_returns_the_graph() {
        let g = disk();
        assert_eq!(random_walk(&g, 10, 1).unwrap(), g);
    }
}
