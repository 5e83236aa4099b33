use fixedbitset::FixedBitSet;

use crate::error::{validation, Result};

/// Lexicographically smallest set of `m` indices whose entries sum to 0 mod `m`.
///
/// Guaranteed to exist once `seq.len() >= 2m - 1`.
pub fn egz_witness(m: u32, seq: &[u32]) -> Result<Option<Vec<usize>>> {
    if m == 0 {
        return validation("modulus must be at least 1");
    }
    if let Some(&bad) = seq.iter().find(|&&r| r >= m) {
        return validation(format!("residue {bad} is not reduced mod {m}"));
    }
    let m_us = m as usize;
    let n = seq.len();
    if n < m_us {
        return Ok(None);
    }
    // reach[i][k]: residues reachable as sums of exactly k entries of seq[i..]
    let width = m_us + 1;
    let mut reach = vec![FixedBitSet::with_capacity(m_us); (n + 1) * width];
    reach[n * width].insert(0);
    for i in (0..n).rev() {
        let r = seq[i] as usize;
        for k in 0..=m_us {
            let mut here = reach[(i + 1) * width + k].clone();
            if k > 0 {
                for s in reach[(i + 1) * width + k - 1].ones() {
                    here.insert((s + r) % m_us);
                }
            }
            reach[i * width + k] = here;
        }
    }
    if !reach[m_us].contains(0) {
        return Ok(None);
    }
    let mut picked = Vec::with_capacity(m_us);
    let (mut need, mut left) = (0usize, m_us);
    for (i, &r) in seq.iter().enumerate() {
        if left == 0 {
            break;
        }
        let rest = (need + m_us - r as usize) % m_us;
        if reach[(i + 1) * width + left - 1].contains(rest) {
            picked.push(i);
            need = rest;
            left -= 1;
        }
    }
    debug_assert_eq!(left, 0);
    Ok(Some(picked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn brute(m: u32, seq: &[u32]) -> Option<Vec<usize>> {
        (0..seq.len())
            .combinations(m as usize)
            .find(|c| c.iter().map(|&i| seq[i]).sum::<u32>() % m == 0)
    }

    #[test]
    fn examples() {
        assert_eq!(egz_witness(2, &[1, 1, 0]).unwrap(), Some(vec![0, 1]));
        assert_eq!(egz_witness(3, &[1, 1, 1, 2, 2]).unwrap(), Some(vec![0, 1, 2]));
        assert_eq!(egz_witness(3, &[0, 0, 0, 1, 1]).unwrap(), Some(vec![0, 1, 2]));
        assert_eq!(egz_witness(1, &[0]).unwrap(), Some(vec![0]));
        assert_eq!(egz_witness(3, &[1, 1]).unwrap(), None);
        assert_eq!(egz_witness(2, &[1, 0]).unwrap(), None);
        assert!(egz_witness(3, &[3]).is_err());
        assert!(egz_witness(0, &[]).is_err());
    }

    #[test]
    fn matches_combination_search_m3_all_lengths() {
        for len in 0..=6 {
            for seq in (0..len).map(|_| 0..3u32).multi_cartesian_product() {
                assert_eq!(egz_witness(3, &seq).unwrap(), brute(3, &seq), "{seq:?}");
            }
        }
    }

    #[test]
    fn combinations_are_lexicographic() {
        // itertools yields index sets in lexicographic order, so `find` gives the least
        let seq = [2, 1, 2, 1, 0];
        assert_eq!(egz_witness(3, &seq).unwrap(), brute(3, &seq));
    }
}
