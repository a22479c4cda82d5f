//! The linear code generated by a cap and the equivalent quantum criteria.
//!
//! A cap `K` of size `n` in PG(r,4) spans an `[n, r+1]₄` code whose generator
//! matrix has the cap points as columns. The code word for a message `m` has
//! weight `n − |K ∩ H_m|` where `H_m` is the hyperplane dual to `m`, which is
//! why even weights, even-parity hyperplane sections and Hermitian
//! self-orthogonality coincide. [`quantum_check`] evaluates the three
//! independently and refuses to answer if they disagree.

use serde::{Deserialize, Serialize};

use crate::caps::Cap;
use crate::error::{Error, Result};
use crate::gf4::{hermitian_dot, pack, packed_coord, Gf4, Gf4Vector};
use crate::linalg::{rank_of, Echelon};

/// Largest row count for which weights are enumerated (4^k messages).
pub const MAX_ENUMERATION_ROWS: usize = 5;

/// Default bound for [`strength`]; only strength 3 versus ≥ 4 matters here.
pub const DEFAULT_STRENGTH_LIMIT: usize = 4;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorMatrix {
    k: usize,
    n: usize,
    /// Column codes, packed as in [`crate::gf4`].
    columns: Vec<u16>,
}

impl GeneratorMatrix {
    pub fn from_rows(rows: &[Vec<Gf4>]) -> Result<GeneratorMatrix> {
        let k = rows.len();
        if k == 0 || k > 8 {
            return Err(Error::Domain(format!("generator matrix needs 1..=8 rows, got {k}")));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Domain("ragged generator matrix".into()));
        }
        let columns = (0..n).map(|j| pack(&rows.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
        Ok(GeneratorMatrix { k, n, columns })
    }

    pub fn from_columns(columns: &[Gf4Vector]) -> Result<GeneratorMatrix> {
        let Some(first) = columns.first() else {
            return Err(Error::Domain("generator matrix needs at least one column".into()));
        };
        let k = first.len();
        if k == 0 || k > 8 || columns.iter().any(|c| c.len() != k) {
            return Err(Error::Domain("columns must share a length in 1..=8".into()));
        }
        Ok(GeneratorMatrix { k, n: columns.len(), columns: columns.iter().map(|c| c.pack()).collect() })
    }

    pub fn rows(&self) -> usize {
        self.k
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Gf4 {
        packed_coord(self.columns[j], self.k, i)
    }

    pub fn row(&self, i: usize) -> Gf4Vector {
        Gf4Vector::new((0..self.n).map(|j| self.entry(i, j)).collect())
    }

    pub fn column(&self, j: usize) -> Gf4Vector {
        Gf4Vector::unpack(self.columns[j], self.k)
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.columns, self.k)
    }

    /// Rows as coordinate strings, the text dump format.
    pub fn row_strings(&self) -> Vec<String> {
        (0..self.k).map(|i| self.row(i).to_string()).collect()
    }

    /// Code word `m · G`, as per-column entries.
    pub fn encode(&self, message: &[Gf4]) -> Vec<Gf4> {
        self.columns
            .iter()
            .map(|&c| (0..self.k).fold(Gf4::ZERO, |acc, i| acc + message[i] * packed_coord(c, self.k, i)))
            .collect()
    }
}

pub fn generator_from_cap(cap: &Cap) -> Result<GeneratorMatrix> {
    if cap.is_empty() {
        return Err(Error::Domain("the empty cap generates no code".into()));
    }
    let geom = cap.geometry();
    Ok(GeneratorMatrix {
        k: geom.coords(),
        n: cap.size(),
        columns: cap.members().iter().map(|p| geom.point_code(p)).collect(),
    })
}

/// Counts `A_0 … A_n` of code words by Hamming weight, over all `4^k`
/// messages (so `A_0 = 4^(k − rank)`).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn all_even(&self) -> bool {
        self.counts.iter().skip(1).step_by(2).all(|&c| c == 0)
    }
}

pub fn weight_distribution(g: &GeneratorMatrix) -> Result<WeightDistribution> {
    if g.k > MAX_ENUMERATION_ROWS {
        return Err(Error::Capacity(format!(
            "{} rows exceed the enumeration limit of {MAX_ENUMERATION_ROWS}",
            g.k
        )));
    }
    let mut counts = vec![0u64; g.n + 1];
    for m in 0u16..(1 << (2 * g.k)) {
        // the message as a packed vector; weight = columns not orthogonal to it
        let w = g.columns.iter().filter(|&&c| !packed_bilinear(m, c, g.k).is_zero()).count();
        counts[w] += 1;
    }
    Ok(WeightDistribution { counts })
}

#[inline]
fn packed_bilinear(a: u16, b: u16, len: usize) -> Gf4 {
    (0..len).fold(Gf4::ZERO, |acc, i| acc + packed_coord(a, len, i) * packed_coord(b, len, i))
}

pub fn all_weights_even(g: &GeneratorMatrix) -> Result<bool> {
    Ok(weight_distribution(g)?.all_even())
}

/// Every hyperplane meets the cap in a number of points of the same parity
/// as the cap size.
pub fn hyperplane_parity_ok(cap: &Cap) -> bool {
    let geom = cap.geometry();
    let parity = cap.size() & 1;
    (0..geom.num_hyperplanes()).all(|h| cap.members().and_count(geom.hyperplane_members(h)) & 1 == parity)
}

/// Hermitian Gram matrix of the rows.
pub fn hermitian_gram(g: &GeneratorMatrix) -> Vec<Vec<Gf4>> {
    let rows: Vec<Gf4Vector> = (0..g.k).map(|i| g.row(i)).collect();
    rows.iter()
        .map(|u| rows.iter().map(|v| hermitian_dot(u, v).expect("equal lengths")).collect())
        .collect()
}

pub fn hermitian_selforthogonal(g: &GeneratorMatrix) -> bool {
    hermitian_gram(g).iter().flatten().all(|x| x.is_zero())
}

/// Largest `t ≤ limit` such that every `t` columns are linearly independent.
pub fn strength(g: &GeneratorMatrix, limit: usize) -> usize {
    let limit = limit.min(g.k).min(g.n);
    let mut subset = Vec::with_capacity(limit);
    let mut ech = Echelon::new(g.k);
    for t in 1..=limit {
        subset.clear();
        if dependent_subset(g, t, 0, &mut ech, &mut subset) {
            return t - 1;
        }
    }
    limit
}

/// Looks for `t` dependent columns, extending the independent prefix held in
/// `ech` (whose rank equals `subset.len()`).
fn dependent_subset(g: &GeneratorMatrix, t: usize, start: usize, ech: &mut Echelon, subset: &mut Vec<usize>) -> bool {
    if subset.len() == t {
        return false;
    }
    let last = subset.len() + 1 == t;
    for j in start..g.n {
        let c = g.columns[j];
        if last {
            if ech.contains(c) {
                return true;
            }
            continue;
        }
        if !ech.insert(c) {
            // dependent prefix: any superset of size t is dependent too
            return true;
        }
        subset.push(j);
        let found = dependent_subset(g, t, j + 1, ech, subset);
        subset.pop();
        ech.pop();
        if found {
            return true;
        }
    }
    false
}

/// The three criteria and the resulting quantum parameters, if any.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CodeProfile {
    pub n: usize,
    pub k: usize,
    pub rank: usize,
    pub strength: usize,
    pub even: bool,
    pub hermitian: bool,
    pub parity: bool,
    /// `[n, n − 2k, strength + 1]` when all three criteria hold and the cap
    /// spans its space.
    pub quantum: Option<[i64; 3]>,
}

impl CodeProfile {
    pub fn is_quantum(&self) -> bool {
        self.quantum.is_some()
    }
}

/// Evaluates weights, hyperplane parity and the Hermitian Gram matrix
/// independently. Disagreement is reported as [`Error::CrossCheck`].
pub fn quantum_check(cap: &Cap) -> Result<CodeProfile> {
    let g = generator_from_cap(cap)?;
    let even = all_weights_even(&g)?;
    let parity = hyperplane_parity_ok(cap);
    let hermitian = hermitian_selforthogonal(&g);
    if even != parity || even != hermitian {
        return Err(Error::CrossCheck(format!(
            "quantum criteria disagree on {cap:?}: even={even} parity={parity} hermitian={hermitian}"
        )));
    }
    let t = strength(&g, DEFAULT_STRENGTH_LIMIT);
    let k = g.rows();
    let rank = g.rank();
    let quantum = (even && rank == k).then(|| [g.cols() as i64, g.cols() as i64 - 2 * k as i64, t as i64 + 1]);
    Ok(CodeProfile { n: g.cols(), k, rank, strength: t, even, hermitian, parity, quantum })
}

/// Whether the code is pure to distance `d`: no dual word of weight below
/// `d`, i.e. strength at least `d − 1`.
pub fn is_pure(g: &GeneratorMatrix, d: usize) -> bool {
    d == 0 || strength(g, d - 1) >= d - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometryTables;
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn frame_cap() -> Cap {
        let g = GeometryTables::shared(4).unwrap();
        let pts: Vec<_> = ["10000", "01000", "00100", "00010", "00001", "11111"]
            .iter()
            .map(|s| g.parse_point(s).unwrap())
            .collect();
        Cap::new(g, &pts).unwrap()
    }

    /// Per-message brute force over explicit code words.
    fn naive_distribution(g: &GeneratorMatrix) -> Vec<u64> {
        let mut counts = vec![0u64; g.cols() + 1];
        let k = g.rows();
        let mut msg = vec![Gf4::ZERO; k];
        fn rec(g: &GeneratorMatrix, i: usize, msg: &mut Vec<Gf4>, counts: &mut Vec<u64>) {
            if i == msg.len() {
                let w = g.encode(msg).iter().filter(|x| !x.is_zero()).count();
                counts[w] += 1;
                return;
            }
            for a in Gf4::ELEMENTS {
                msg[i] = a;
                rec(g, i + 1, msg, counts);
            }
        }
        rec(g, 0, &mut msg, &mut counts);
        counts
    }

    /// Brute-force strength: smallest dependent subset size minus one.
    fn naive_strength(g: &GeneratorMatrix, limit: usize) -> usize {
        let n = g.cols();
        for t in 1..=limit.min(g.rows()) {
            for bits in 0u64..(1 << n) {
                if bits.count_ones() as usize != t {
                    continue;
                }
                let cols: Vec<u16> = (0..n).filter(|j| bits >> j & 1 == 1).map(|j| g.column(j).pack()).collect();
                if rank_of(&cols, g.rows()) < t {
                    return t - 1;
                }
            }
        }
        limit.min(g.rows())
    }

    #[test]
    fn generator_examples() {
        let g = GeometryTables::shared(4).unwrap();
        let single = Cap::new(g.clone(), &[g.parse_point("10000").unwrap()]).unwrap();
        let m = generator_from_cap(&single).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 1));
        assert_eq!(m.column(0).to_string(), "10000");
        let f = generator_from_cap(&frame_cap()).unwrap();
        assert_eq!(f.row_strings(), vec!["000011", "000101", "001001", "010001", "100001"]);
        assert_eq!(generator_from_cap(&frame_cap()).unwrap(), f);
        assert!(generator_from_cap(&Cap::empty(g)).is_err());
    }

    #[test]
    fn single_point_distribution() {
        let g = GeometryTables::shared(4).unwrap();
        let single = Cap::new(g.clone(), &[g.parse_point("10000").unwrap()]).unwrap();
        let m = generator_from_cap(&single).unwrap();
        let wd = weight_distribution(&m).unwrap();
        assert_eq!(wd.counts, vec![256, 768]);
        assert!(!all_weights_even(&m).unwrap());
    }

    #[test]
    fn frame_distribution_matches_naive() {
        let m = generator_from_cap(&frame_cap()).unwrap();
        let wd = weight_distribution(&m).unwrap();
        assert_eq!(wd.counts, naive_distribution(&m));
        assert_eq!(wd.total(), 1024);
        assert_eq!(wd.counts[0], 1);
        // message (1, ω, 0, 0, 0) has weight 3
        let word = m.encode(&[Gf4::ONE, Gf4::OMEGA, Gf4::ZERO, Gf4::ZERO, Gf4::ZERO]);
        assert_eq!(word.iter().filter(|x| !x.is_zero()).count(), 3);
        assert!(!all_weights_even(&m).unwrap());
    }

    #[test]
    fn capacity_limit() {
        let rows = vec![vec![Gf4::ONE]; 6];
        let m = GeneratorMatrix::from_rows(&rows).unwrap();
        assert!(matches!(weight_distribution(&m), Err(Error::Capacity(_))));
    }

    #[test]
    fn hermitian_examples() {
        let zero = GeneratorMatrix::from_rows(&[vec![Gf4::ZERO; 4]]).unwrap();
        assert!(hermitian_selforthogonal(&zero));
        let m = generator_from_cap(&frame_cap()).unwrap();
        let gram = hermitian_gram(&m);
        // each row has two ones, so the diagonal is 1 + 1 = 0; off-diagonal entries share only the last column
        assert!(gram.iter().enumerate().all(|(i, r)| r[i].is_zero()));
        assert_eq!(gram[0][1], Gf4::ONE);
        assert!(!hermitian_selforthogonal(&m));
    }

    #[test]
    fn parity_examples() {
        let g = GeometryTables::shared(4).unwrap();
        let two = Cap::new(g.clone(), &[0, 1]).unwrap();
        assert!(!hyperplane_parity_ok(&two));
        let witness = (0..g.num_hyperplanes()).find(|&h| two.members().and_count(g.hyperplane_members(h)) == 1);
        assert!(witness.is_some());
    }

    #[test]
    fn strength_examples() {
        let m = generator_from_cap(&frame_cap()).unwrap();
        assert_eq!(strength(&m, 5), naive_strength(&m, 5));
        assert_eq!(strength(&m, 5), 5);
        let v = |s: &str| s.parse::<Gf4Vector>().unwrap();
        let planted = GeneratorMatrix::from_columns(&[v("10000"), v("01000"), v("1w000"), v("00100")]).unwrap();
        assert_eq!(strength(&planted, 4), 2);
        assert_eq!(strength(&planted, 4), naive_strength(&planted, 4));
        let with_zero = GeneratorMatrix::from_columns(&[v("10000"), v("00000")]).unwrap();
        assert_eq!(strength(&with_zero, 4), 0);
    }

    #[test]
    fn strength_matches_brute_force_on_random_columns() {
        let mut rng = StdRng::seed_from_u64(9);
        let g = GeometryTables::shared(3).unwrap();
        let all: Vec<usize> = (0..g.num_points()).collect();
        for _ in 0..200 {
            let n = 4 + (rand::Rng::gen_range(&mut rng, 0..8));
            let cols: Vec<Gf4Vector> = all.choose_multiple(&mut rng, n).map(|&p| g.point_vector(p)).collect();
            let m = GeneratorMatrix::from_columns(&cols).unwrap();
            assert_eq!(strength(&m, 4), naive_strength(&m, 4));
        }
    }

    #[test]
    fn frame_profile() {
        let p = quantum_check(&frame_cap()).unwrap();
        assert!(!p.even && !p.parity && !p.hermitian);
        assert!(p.quantum.is_none());
        assert_eq!(p.strength, 4);
        assert_eq!(p.rank, 5);
        let json = serde_json::to_value(&p).unwrap();
        for key in ["n", "k", "strength", "even", "hermitian", "parity", "quantum"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn purity() {
        let m = generator_from_cap(&frame_cap()).unwrap();
        assert!(is_pure(&m, 4));
        assert!(is_pure(&m, 6));
    }
}
