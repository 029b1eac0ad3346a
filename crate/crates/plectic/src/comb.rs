//! Shuffle permutations, straight unshuffles and Koszul signs.
//!
//! Conventions: a permutation is stored by its image sequence (1-based), so
//! `images[i-1] = sigma(i)`. A `(p,q)`-shuffle has ascending images on the
//! first `p` and last `q` domain positions; an unshuffle is the inverse
//! condition (values `1..=p` appear in ascending positions).

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombError {
    #[error("degree vector length {degrees} does not match permutation length {perm}")]
    LengthMismatch { perm: usize, degrees: usize },
    #[error("invalid block sizes: q={q} not in 1..=p={p}")]
    InvalidBlock { q: usize, p: usize },
}

/// A permutation of `{1..k}` given by its image sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s == (1..=images.len()).collect::<Vec<_>>()
        });
        Permutation { images }
    }

    pub fn identity(k: usize) -> Self {
        Permutation { images: (1..=k).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `sigma(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// Determinant sign, computed from the inversion count.
    pub fn parity(&self) -> i8 {
        let mut s = 1i8;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    s = -s;
                }
            }
        }
        s
    }

    /// Ascending images within each consecutive domain block.
    pub fn is_block_shuffle(&self, blocks: &[usize]) -> bool {
        let mut pos = 0;
        for &b in blocks {
            for t in 1..b {
                if self.images[pos + t - 1] >= self.images[pos + t] {
                    return false;
                }
            }
            pos += b;
        }
        pos == self.images.len()
    }

    pub fn is_shuffle(&self, p: usize, q: usize) -> bool {
        self.len() == p + q && self.is_block_shuffle(&[p, q])
    }

    pub fn is_unshuffle(&self, p: usize, q: usize) -> bool {
        self.len() == p + q && self.inverse().is_shuffle(p, q)
    }
}

/// Tensor degrees of the arguments a permutation acts on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeVector(pub Vec<i64>);

/// All `(p,q)`-shuffles in lexicographic order on image sequences.
pub fn enumerate_shuffles(p: usize, q: usize) -> Vec<Permutation> {
    enumerate_block_shuffles(&[p, q])
}

/// All permutations ascending on each consecutive domain block, lexicographic.
pub fn enumerate_block_shuffles(blocks: &[usize]) -> Vec<Permutation> {
    let total: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut acc = Vec::with_capacity(total);
    fn rec(rem: &mut Vec<usize>, blocks: &[usize], acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if blocks.is_empty() {
            out.push(acc.clone());
            return;
        }
        let b = blocks[0];
        let n = rem.len();
        if b == 0 {
            rec(rem, &blocks[1..], acc, out);
            return;
        }
        // choose an ascending b-subset of rem
        let mut idx: Vec<usize> = (0..b).collect();
        loop {
            let chosen: Vec<usize> = idx.iter().map(|&i| rem[i]).collect();
            let mut rest: Vec<usize> = Vec::with_capacity(n - b);
            for (i, &v) in rem.iter().enumerate() {
                if !idx.contains(&i) {
                    rest.push(v);
                }
            }
            acc.extend_from_slice(&chosen);
            rec(&mut rest, &blocks[1..], acc, out);
            acc.truncate(acc.len() - b);
            // next combination
            let mut i = b;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if idx[i] != i + n - b {
                    break;
                }
                if i == 0 {
                    return;
                }
            }
            idx[i] += 1;
            for j in i + 1..b {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let mut rem: Vec<usize> = (1..=total).collect();
    let mut raw = Vec::new();
    rec(&mut rem, blocks, &mut acc, &mut raw);
    raw.sort();
    for images in raw {
        out.push(Permutation::new(images));
    }
    out
}

/// Koszul sign `e(sigma; v_1..v_k)` defined by
/// `v_1 (x) .. (x) v_k = e * v_{s(1)} (x) .. (x) v_{s(k)}`:
/// the product of `(-1)^{|v_a||v_b|}` over inversions `(a,b)` of the image sequence.
pub fn koszul_sign(sigma: &Permutation, degrees: &DegreeVector) -> Result<i8, CombError> {
    if sigma.len() != degrees.0.len() {
        return Err(CombError::LengthMismatch { perm: sigma.len(), degrees: degrees.0.len() });
    }
    let im = sigma.images();
    let mut exp = 0i64;
    for i in 0..im.len() {
        for j in i + 1..im.len() {
            if im[i] > im[j] {
                exp += degrees.0[im[i] - 1] * degrees.0[im[j] - 1];
            }
        }
    }
    Ok(if exp % 2 == 0 { 1 } else { -1 })
}

/// `sgn(sigma) * e(sigma; ...)`.
pub fn antisym_koszul_sign(sigma: &Permutation, degrees: &DegreeVector) -> Result<i8, CombError> {
    Ok(sigma.parity() * koszul_sign(sigma, degrees)?)
}

/// All straight `(q_j, p_j)_{j=1..k}`-unshuffles, as distinct permutations.
///
/// Each block of length `p_j` carries a distinguished interval of length
/// `q_j`; a straight unshuffle preserves the order within every block and
/// maps the j-th distinguished interval onto the contiguous image interval
/// `[L_j+1, L_{j+1}]`. Free letters left of a distinguished interval land in
/// the common prefix, free letters right of it in the common suffix. The same
/// permutation can admit several interval placements; summation formulas that
/// depend on the placement enumerate those decorations separately.
pub fn enumerate_straight_unshuffles(blocks: &[(usize, usize)]) -> Result<Vec<Permutation>, CombError> {
    for &(q, p) in blocks {
        if q < 1 || q > p {
            return Err(CombError::InvalidBlock { q, p });
        }
    }
    let k = blocks.len();
    let total: usize = blocks.iter().map(|&(_, p)| p).sum();
    let q_total: usize = blocks.iter().map(|&(q, _)| q).sum();
    let mut starts = vec![0usize; k + 1];
    for j in 0..k {
        starts[j + 1] = starts[j] + blocks[j].1;
    }
    let mut out = Vec::new();
    let mut offsets = vec![0usize; k];
    loop {
        // letters split by the current offsets
        let lefts: Vec<Vec<usize>> = (0..k)
            .map(|j| (starts[j] + 1..starts[j] + 1 + offsets[j]).collect())
            .collect();
        let dists: Vec<Vec<usize>> = (0..k)
            .map(|j| {
                (starts[j] + offsets[j] + 1..starts[j] + offsets[j] + 1 + blocks[j].0).collect()
            })
            .collect();
        let rights: Vec<Vec<usize>> = (0..k)
            .map(|j| (starts[j] + offsets[j] + 1 + blocks[j].0..starts[j + 1] + 1).collect())
            .collect();
        let n_left: usize = lefts.iter().map(Vec::len).sum();
        let left_sizes: Vec<usize> = lefts.iter().map(Vec::len).collect();
        let right_sizes: Vec<usize> = rights.iter().map(Vec::len).collect();
        for presh in enumerate_block_shuffles(&left_sizes) {
            for sufsh in enumerate_block_shuffles(&right_sizes) {
                let mut images = vec![0usize; total];
                let cat_left: Vec<usize> = lefts.iter().flatten().copied().collect();
                for (t, &letter) in cat_left.iter().enumerate() {
                    images[letter - 1] = presh.apply(t + 1);
                }
                let mut pos = n_left;
                for d in &dists {
                    for &letter in d {
                        pos += 1;
                        images[letter - 1] = pos;
                    }
                }
                let cat_right: Vec<usize> = rights.iter().flatten().copied().collect();
                for (t, &letter) in cat_right.iter().enumerate() {
                    images[letter - 1] = n_left + q_total + sufsh.apply(t + 1);
                }
                out.push(Permutation::new(images));
            }
        }
        // advance offsets (mixed-radix counter over 0..=p_j-q_j)
        let mut j = 0;
        loop {
            if j == k {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            if offsets[j] < blocks[j].1 - blocks[j].0 {
                offsets[j] += 1;
                break;
            }
            offsets[j] = 0;
            j += 1;
        }
    }
}

pub(crate) fn neg_one_pow(e: i64) -> i8 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn shuffle_examples() {
        // (1,1): both orderings
        let s = enumerate_shuffles(1, 1);
        assert_eq!(
            s.iter().map(|p| p.images().to_vec()).collect::<Vec<_>>(),
            vec![vec![1, 2], vec![2, 1]]
        );
        // (2,1): brute-force filter of S_3 by the shuffle condition
        let s = enumerate_shuffles(2, 1);
        let brute: Vec<Vec<usize>> = permutations_of(3)
            .into_iter()
            .filter(|im| im[0] < im[1])
            .collect();
        assert_eq!(s.len(), binom(3, 1));
        assert_eq!(s.iter().map(|p| p.images().to_vec()).collect::<Vec<_>>(), brute);
        // (0,3): identity only
        let s = enumerate_shuffles(0, 3);
        assert_eq!(s, vec![Permutation::identity(3)]);
    }

    #[test]
    fn shuffle_counts() {
        for p in 0..=6usize {
            for q in 0..=6usize {
                assert_eq!(enumerate_shuffles(p, q).len(), binom(p + q, p));
            }
        }
    }

    fn permutations_of(k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::new();
            for partial in out {
                for v in 1..=k {
                    if !partial.contains(&v) {
                        let mut w = partial.clone();
                        w.push(v);
                        next.push(w);
                    }
                }
            }
            out = next;
        }
        out.retain(|v| v.len() == k);
        out
    }

    #[test]
    fn koszul_examples() {
        // sigma = (3,1,2): (-1)^{d1 d3 + d2 d3}
        let s = Permutation::new(vec![3, 1, 2]);
        for d in [[1i64, 1, 1], [0, 1, 1], [2, 1, 1], [1, 0, 3]] {
            let expect = neg_one_pow(d[0] * d[2] + d[1] * d[2]);
            assert_eq!(koszul_sign(&s, &DegreeVector(d.to_vec())).unwrap(), expect);
        }
        // identity
        assert_eq!(
            koszul_sign(&Permutation::identity(4), &DegreeVector(vec![3, 1, 2, 5])).unwrap(),
            1
        );
        // all degrees even: +1 for every sigma in S_4
        for im in permutations_of(4) {
            let s = Permutation::new(im);
            assert_eq!(koszul_sign(&s, &DegreeVector(vec![2, 0, 4, 2])).unwrap(), 1);
        }
        // antisymmetric examples
        let t = Permutation::new(vec![2, 1]);
        assert_eq!(antisym_koszul_sign(&t, &DegreeVector(vec![0, 0])).unwrap(), -1);
        assert_eq!(antisym_koszul_sign(&t, &DegreeVector(vec![1, 1])).unwrap(), 1);
        assert_eq!(antisym_koszul_sign(&Permutation::identity(3), &DegreeVector(vec![1, 2, 3])).unwrap(), 1);
    }

    #[test]
    fn koszul_composition_rule() {
        // e(tau sigma; v) = e(tau; sigma-permuted v) * e(sigma; v) over S_4, degrees in {0,1,2}
        let degs: Vec<Vec<i64>> = {
            let mut v = Vec::new();
            for a in 0..3i64 {
                for b in 0..3i64 {
                    for c in 0..3i64 {
                        for d in 0..3i64 {
                            v.push(vec![a, b, c, d]);
                        }
                    }
                }
            }
            v
        };
        let perms = permutations_of(4);
        for sim in &perms {
            for tim in &perms {
                let sigma = Permutation::new(sim.clone());
                let tau = Permutation::new(tim.clone());
                // (tau sigma)(i) = sigma(tau(i)): composition so that
                // v_{ts(1)} x .. x v_{ts(k)} regroups correctly
                let comp = Permutation::new((1..=4).map(|i| sigma.apply(tau.apply(i))).collect());
                for d in degs.iter().step_by(17) {
                    let dv = DegreeVector(d.clone());
                    let permuted = DegreeVector((1..=4).map(|i| d[sigma.apply(i) - 1]).collect());
                    let lhs = koszul_sign(&comp, &dv).unwrap();
                    let rhs = koszul_sign(&tau, &permuted).unwrap() * koszul_sign(&sigma, &dv).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn koszul_adjacent_transposition_oracle() {
        // decompose sigma into adjacent transpositions and multiply the factors
        fn oracle(sigma: &Permutation, d: &[i64]) -> i8 {
            let mut arr: Vec<usize> = sigma.images().to_vec();
            let mut sign = 1i8;
            for i in 0..arr.len() {
                for j in 0..arr.len() - 1 - i {
                    if arr[j] > arr[j + 1] {
                        if (d[arr[j] - 1] * d[arr[j + 1] - 1]) % 2 != 0 {
                            sign = -sign;
                        }
                        arr.swap(j, j + 1);
                    }
                }
            }
            sign
        }
        for im in permutations_of(4) {
            let s = Permutation::new(im);
            for a in 0..3i64 {
                for b in 0..3i64 {
                    for c in 0..3i64 {
                        for d4 in 0..3i64 {
                            let d = vec![a, b, c, d4];
                            assert_eq!(
                                koszul_sign(&s, &DegreeVector(d.clone())).unwrap(),
                                oracle(&s, &d)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn straight_unshuffle_examples() {
        // single singleton block: identity only
        let s = enumerate_straight_unshuffles(&[(1, 1)]).unwrap();
        assert_eq!(s, vec![Permutation::identity(1)]);

        // a 4-block string with blocks (q,p) = (1,4),(2,4),(2,3),(2,2): the
        // rearrangement 9 1 2 5 6 10 11 12 13 7 3 8 4 must occur
        let s = enumerate_straight_unshuffles(&[(1, 4), (2, 4), (2, 3), (2, 2)]).unwrap();
        let rearranged: Vec<usize> = {
            let arrangement = [9, 1, 2, 5, 6, 10, 11, 12, 13, 7, 3, 8, 4];
            let mut img = vec![0usize; 13];
            for (pos, &letter) in arrangement.iter().enumerate() {
                img[letter - 1] = pos + 1;
            }
            img
        };
        assert!(s.contains(&Permutation::new(rearranged)));

        // blocks [(1,2),(1,1)]: brute-force filter of S_3 by the two conditions
        let s = enumerate_straight_unshuffles(&[(1, 2), (1, 1)]).unwrap();
        let brute: Vec<Permutation> = permutations_of(3)
            .into_iter()
            .map(Permutation::new)
            .filter(|sg| {
                // order preserved within blocks {1,2} and {3}
                if sg.apply(1) >= sg.apply(2) {
                    return false;
                }
                // some (l1, l2=0) places the distinguished singletons contiguously:
                // sigma(1+l1) = L1+1 and sigma(3) = L1+2 with L1 = l1
                (0..=1usize).any(|l1| sg.apply(1 + l1) == l1 + 1 && sg.apply(3) == l1 + 2)
            })
            .collect();
        assert_eq!(s, brute);

        // invalid block
        assert!(enumerate_straight_unshuffles(&[(2, 1)]).is_err());
        assert!(enumerate_straight_unshuffles(&[(0, 1)]).is_err());
    }

    #[test]
    fn straight_unshuffles_are_unshuffles() {
        let blocks = [(1, 2), (2, 3)];
        let sizes: Vec<usize> = blocks.iter().map(|&(_, p)| p).collect();
        for s in enumerate_straight_unshuffles(&blocks).unwrap() {
            // order within each domain block is preserved
            assert!(s.is_block_shuffle(&sizes));
        }
    }
}
