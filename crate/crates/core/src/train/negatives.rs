use rand::Rng as _;

use crate::data::KnowledgeTuple;
use crate::error::{Error, Result};
use crate::rng::Rng;

/// `n` corruptions per position, position-major: negative `i·n + j` replaces the
/// entity at slot `i` with a uniformly drawn different entity. Negatives are not
/// filtered against known facts.
pub fn sample_negatives(
    x: &KnowledgeTuple,
    n: usize,
    entity_count: usize,
    rng: &mut Rng,
) -> Result<Vec<KnowledgeTuple>> {
    if n == 0 {
        return Err(Error::Argument("negative ratio must be at least 1".into()));
    }
    if entity_count <= 1 {
        return Err(Error::Argument(format!(
            "corrupting a tuple needs at least two entities, got {entity_count}"
        )));
    }
    let mut out = Vec::with_capacity(n * x.arity());
    for (slot, &orig) in x.entities.iter().enumerate() {
        for _ in 0..n {
            let mut e = rng.random_range(0..entity_count - 1);
            if e >= orig {
                e += 1;
            }
            out.push(x.with_entity(slot, e));
        }
    }
    Ok(out)
}
