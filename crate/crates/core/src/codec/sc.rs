use super::{check_node, clamp, variable_node, CheckNode, CodeConfig};
use crate::error::{domain, Result};

/// Successive-cancellation decoding. Returns the `K + crc` non-frozen
/// decisions in index order.
pub fn sc_decode(llr: &[f64], config: &CodeConfig) -> Result<Vec<u8>> {
    sc_decode_with(llr, config.frozen_mask(), config.check_node())
        .map(|u| config.info_positions().iter().map(|&p| u[p]).collect())
}

/// SC over an explicit frozen mask, returning the full decided `u`.
pub fn sc_decode_with(llr: &[f64], frozen: &[bool], kind: CheckNode) -> Result<Vec<u8>> {
    if llr.len() != frozen.len() || !llr.len().is_power_of_two() {
        return domain(format!(
            "{} LLRs for a block of length {}",
            llr.len(),
            frozen.len()
        ));
    }
    let channel: Vec<f64> = llr.iter().map(|&l| clamp(l)).collect();
    let mut u = vec![0u8; llr.len()];
    decode_node(&channel, frozen, &mut u, kind);
    Ok(u)
}

/// Decodes the subtree seen through `llr`, writing its leaves into `u` and
/// returning the subtree's re-encoded bits.
fn decode_node(llr: &[f64], frozen: &[bool], u: &mut [u8], kind: CheckNode) -> Vec<u8> {
    if llr.len() == 1 {
        u[0] = if frozen[0] || llr[0] >= 0.0 { 0 } else { 1 };
        return vec![u[0]];
    }
    let half = llr.len() / 2;
    let (top, bottom) = llr.split_at(half);
    let (frozen_l, frozen_r) = frozen.split_at(half);
    let (u_l, u_r) = u.split_at_mut(half);

    let left_llr: Vec<f64> = top.iter().zip(bottom).map(|(&a, &b)| check_node(a, b, kind)).collect();
    let a = decode_node(&left_llr, frozen_l, u_l, kind);
    let right_llr: Vec<f64> = top
        .iter()
        .zip(bottom)
        .zip(&a)
        .map(|((&l1, &l2), &bit)| variable_node(l1, l2, bit))
        .collect();
    let b = decode_node(&right_llr, frozen_r, u_r, kind);

    let mut x: Vec<u8> = a.iter().zip(&b).map(|(p, q)| p ^ q).collect();
    x.extend_from_slice(&b);
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{polar_transform, Crc};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noiseless(x: &[u8]) -> Vec<f64> {
        x.iter().map(|&b| if b == 0 { 1e9 } else { -1e9 }).collect()
    }

    #[test]
    fn noiseless_recovery_any_frozen_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=8u32 {
            let size = 1usize << n;
            for _ in 0..10 {
                let frozen: Vec<bool> = (0..size).map(|_| rng.random_bool(0.5)).collect();
                let u: Vec<u8> = (0..size).map(|i| if frozen[i] { 0 } else { rng.random_range(0..2) }).collect();
                let llr = noiseless(&polar_transform(&u));
                assert_eq!(sc_decode_with(&llr, &frozen, CheckNode::Exact).unwrap(), u);
                assert_eq!(sc_decode_with(&llr, &frozen, CheckNode::MinSum).unwrap(), u);
            }
        }
    }

    #[test]
    fn all_frozen_returns_nothing() {
        let c = CodeConfig::new(3, 0, Crc::NONE, &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        assert!(sc_decode(&[1.0; 8], &c).unwrap().is_empty());
        assert!(sc_decode(&[1.0; 4], &c).is_err());
    }
}
