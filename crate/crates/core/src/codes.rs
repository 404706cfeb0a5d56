//! Local codes, Tanner codes and repeat-accumulate graphs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2;
use crate::graph::{Node, TannerGraph};

/// Longest local code kept as an explicit codeword list.
pub const MAX_LOCAL_LENGTH: usize = 16;
/// Longest Tanner code that `enumerate_codewords` accepts.
pub const MAX_ENUM_LENGTH: usize = 28;

/// A binary word as a list of 0/1 entries.
pub type Word = Vec<u8>;

/// Position `t` of a word maps to bit `t` of a mask.
pub(crate) fn word_to_mask(word: &[u8]) -> u64 {
    word.iter()
        .enumerate()
        .fold(0, |m, (t, &b)| m | (u64::from(b & 1) << t))
}

pub(crate) fn mask_to_word(mask: u64, len: usize) -> Word {
    (0..len).map(|t| ((mask >> t) & 1) as u8).collect()
}

pub fn parse_word(s: &str) -> Result<Word> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::parse(
                format!("word `{s}`"),
                format!("`{ch}` is not a binary digit"),
            )),
        })
        .collect()
}

pub fn word_to_string(word: &[u8]) -> String {
    word.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

pub(crate) fn check_binary(word: &[u8], expected_len: usize) -> Result<()> {
    if word.len() != expected_len {
        return Err(Error::LengthMismatch {
            expected: expected_len,
            found: word.len(),
        });
    }
    if word.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParameter("word entries must be 0 or 1".into()));
    }
    Ok(())
}

/// A binary linear code of small length, stored as its full codeword list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCode {
    length: usize,
    generators: Vec<u64>,
    /// Sorted lexicographically as words (position 0 most significant).
    codewords: Vec<u64>,
    members: Vec<bool>,
    even: bool,
}

impl LocalCode {
    /// Span of the given rows.
    pub fn from_generators(length: usize, rows: &[Word]) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidParameter("local code length must be positive".into()));
        }
        if length > MAX_LOCAL_LENGTH {
            return Err(Error::TooLarge {
                what: "local code length",
                size: length,
                limit: MAX_LOCAL_LENGTH,
            });
        }
        let mut generators = Vec::with_capacity(rows.len());
        for row in rows {
            check_binary(row, length)?;
            generators.push(word_to_mask(row));
        }
        let mut basis = generators.clone();
        gf2::rref(&mut basis, length);
        let mut codewords = gf2::span(&basis);
        codewords.sort_by_key(|&m| lex_key(m, length));
        let mut members = vec![false; 1 << length];
        for &c in &codewords {
            members[c as usize] = true;
        }
        let even = codewords.iter().all(|c| c.count_ones() % 2 == 0);
        Ok(LocalCode {
            length,
            generators,
            codewords,
            members,
            even,
        })
    }

    /// The even-weight (single parity-check) code, generated by
    /// `e_1+e_2, e_2+e_3, ...`.
    pub fn spc(length: usize) -> Result<Self> {
        if length < 2 {
            return Err(Error::InvalidParameter(format!(
                "parity code needs length >= 2, got {length}"
            )));
        }
        let rows: Vec<Word> = (0..length - 1)
            .map(|i| {
                let mut w = vec![0u8; length];
                w[i] = 1;
                w[i + 1] = 1;
                w
            })
            .collect();
        Self::from_generators(length, &rows)
    }

    /// All `2^length` words.
    pub fn full(length: usize) -> Result<Self> {
        let rows: Vec<Word> = (0..length)
            .map(|i| {
                let mut w = vec![0u8; length];
                w[i] = 1;
                w
            })
            .collect();
        Self::from_generators(length, &rows)
    }

    /// Only the zero word.
    pub fn zero(length: usize) -> Result<Self> {
        Self::from_generators(length, &[])
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn generators(&self) -> Vec<Word> {
        self.generators
            .iter()
            .map(|&g| mask_to_word(g, self.length))
            .collect()
    }

    /// Codewords in lexicographic order.
    pub fn codewords(&self) -> Vec<Word> {
        self.codewords
            .iter()
            .map(|&c| mask_to_word(c, self.length))
            .collect()
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        word.len() == self.length && self.members[word_to_mask(word) as usize]
    }

    pub(crate) fn contains_mask(&self, mask: u64) -> bool {
        self.members[mask as usize]
    }

    /// Basis of the dual code, as masks.
    pub(crate) fn dual_basis(&self) -> Vec<u64> {
        gf2::nullspace(&self.generators, self.length)
    }
}

fn lex_key(mask: u64, len: usize) -> u64 {
    (0..len).fold(0, |k, t| (k << 1) | ((mask >> t) & 1))
}

/// Result of checking the even-code conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenReport {
    pub odd_degree_vars: Vec<usize>,
    pub odd_weight_checks: Vec<usize>,
}

impl EvenReport {
    pub fn is_even(&self) -> bool {
        self.odd_degree_vars.is_empty() && self.odd_weight_checks.is_empty()
    }
}

/// A Tanner code: a graph, one local code per check and a puncturing mask.
#[derive(Clone, Debug)]
pub struct TannerCode {
    graph: TannerGraph,
    locals: Vec<LocalCode>,
    puncture: Vec<usize>,
    even: bool,
}

impl TannerCode {
    pub fn new(graph: TannerGraph, locals: Vec<LocalCode>, puncture: Vec<usize>) -> Result<Self> {
        if locals.len() != graph.n_checks() {
            return Err(Error::LengthMismatch {
                expected: graph.n_checks(),
                found: locals.len(),
            });
        }
        for (c, local) in locals.iter().enumerate() {
            if local.length() != graph.check_degree(c) {
                return Err(Error::Validation(format!(
                    "local code of check {c} has length {} but the check has degree {}",
                    local.length(),
                    graph.check_degree(c)
                )));
            }
        }
        let mut puncture = puncture;
        puncture.sort_unstable();
        puncture.dedup();
        if let Some(&bad) = puncture.iter().find(|&&v| v >= graph.n_vars()) {
            return Err(Error::IndexOutOfRange {
                what: "punctured variable",
                index: bad,
                bound: graph.n_vars(),
            });
        }
        let mut code = TannerCode {
            graph,
            locals,
            puncture,
            even: false,
        };
        code.even = code.validate_even().is_even();
        Ok(code)
    }

    /// Every check gets the parity code of its degree.
    pub fn with_spc(graph: TannerGraph) -> Result<Self> {
        let locals = (0..graph.n_checks())
            .map(|c| LocalCode::spc(graph.check_degree(c)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, locals, Vec::new())
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn locals(&self) -> &[LocalCode] {
        &self.locals
    }

    pub fn local(&self, c: usize) -> &LocalCode {
        &self.locals[c]
    }

    pub fn puncture(&self) -> &[usize] {
        &self.puncture
    }

    pub fn n(&self) -> usize {
        self.graph.n_vars()
    }

    /// Cached result of [`TannerCode::validate_even`].
    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn validate_even(&self) -> EvenReport {
        EvenReport {
            odd_degree_vars: (0..self.graph.n_vars())
                .filter(|&v| !self.graph.var_degree(v).is_multiple_of(2))
                .collect(),
            odd_weight_checks: (0..self.graph.n_checks())
                .filter(|&c| !self.locals[c].is_even())
                .collect(),
        }
    }

    pub fn is_codeword(&self, x: &[u8]) -> Result<bool> {
        check_binary(x, self.n())?;
        Ok(self.graph.checks().iter().zip(&self.locals).all(|(list, local)| {
            let proj = list
                .iter()
                .enumerate()
                .fold(0u64, |m, (t, &v)| m | (u64::from(x[v]) << t));
            local.contains_mask(proj)
        }))
    }

    /// Basis of the code over GF(2), as masks over the variables.
    pub(crate) fn basis(&self) -> Vec<u64> {
        let mut rows = Vec::new();
        for (list, local) in self.graph.checks().iter().zip(&self.locals) {
            for h in local.dual_basis() {
                let row = list
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| (h >> t) & 1 == 1)
                    .fold(0u64, |m, (_, &v)| m | (1u64 << v));
                rows.push(row);
            }
        }
        gf2::nullspace(&rows, self.n())
    }

    pub fn dimension(&self) -> Result<usize> {
        self.guard_enum()?;
        Ok(self.basis().len())
    }

    fn guard_enum(&self) -> Result<()> {
        if self.n() > MAX_ENUM_LENGTH {
            return Err(Error::TooLarge {
                what: "code length for enumeration",
                size: self.n(),
                limit: MAX_ENUM_LENGTH,
            });
        }
        Ok(())
    }

    /// All codewords in lexicographic order, via the span of a null-space
    /// basis of the stacked local parity checks.
    pub fn enumerate_codewords(&self) -> Result<Vec<Word>> {
        self.guard_enum()?;
        let mut words: Vec<Word> = gf2::span(&self.basis())
            .into_iter()
            .map(|m| mask_to_word(m, self.n()))
            .collect();
        words.sort();
        Ok(words)
    }

    pub fn is_punctured(&self, v: usize) -> bool {
        self.puncture.binary_search(&v).is_ok()
    }
}

/// How the repeated bits are permuted before accumulation.
#[derive(Clone, Debug)]
pub enum Interleaver {
    Identity,
    Explicit(Vec<usize>),
    Random(u64),
}

/// Repeat-accumulate code as a punctured Tanner code.
///
/// Variables `0..k` are the systematic bits (degree `q_i`, punctured);
/// variables `k..k+n` with `n = sum(q_i)` are the accumulator bits. Check `c`
/// lists `[systematic owner of repeat slot pi(c), p_{c-1}, p_c]` where the
/// chain wraps so that check 0 sees `p_{n-1}`; every accumulator bit then has
/// degree 2 and every check degree 3.
pub fn build_ra_graph(repetitions: &[usize], interleaver: Interleaver) -> Result<TannerCode> {
    if repetitions.is_empty() {
        return Err(Error::InvalidParameter("at least one systematic bit is needed".into()));
    }
    if let Some(&q) = repetitions.iter().find(|&&q| q == 0 || q % 2 != 0) {
        return Err(Error::OddRepetition(q));
    }
    let k = repetitions.len();
    let n: usize = repetitions.iter().sum();
    let perm = match interleaver {
        Interleaver::Identity => (0..n).collect(),
        Interleaver::Explicit(p) => {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
                return Err(Error::InvalidPermutation(n));
            }
            p
        }
        Interleaver::Random(seed) => {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            p
        }
    };

    let owner: Vec<usize> = repetitions
        .iter()
        .enumerate()
        .flat_map(|(i, &q)| std::iter::repeat_n(i, q))
        .collect();
    let acc = |i: usize| k + i;
    let checks = (0..n)
        .map(|c| vec![owner[perm[c]], acc((c + n - 1) % n), acc(c)])
        .collect();
    let graph = TannerGraph::new(k + n, checks)?;
    let locals = (0..n).map(|_| LocalCode::spc(3)).collect::<Result<Vec<_>>>()?;
    TannerCode::new(graph, locals, (0..k).collect())
}

/// `(punctured, total)` variable occurrences along a path; the endpoint of a
/// closed path counts once.
pub fn punctured_occurrences(code: &TannerCode, path: &[Node]) -> (usize, usize) {
    let closed = path.len() > 1 && path.first() == path.last();
    let body = if closed { &path[..path.len() - 1] } else { path };
    body.iter().fold((0, 0), |(p, total), node| match node {
        Node::Var(v) => (p + usize::from(code.is_punctured(*v)), total + 1),
        Node::Check(_) => (p, total),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn spc_examples() {
        assert_eq!(LocalCode::spc(2).unwrap().codewords(), vec![w("00"), w("11")]);
        assert_eq!(
            LocalCode::spc(3).unwrap().codewords(),
            vec![w("000"), w("011"), w("101"), w("110")]
        );
        let c4 = LocalCode::spc(4).unwrap();
        assert_eq!(c4.size(), 8);
        assert!(c4.is_even());
        assert!(LocalCode::spc(1).is_err());
    }

    #[test]
    fn generator_examples() {
        let rep = LocalCode::from_generators(4, &[w("1111")]).unwrap();
        assert_eq!(rep.codewords(), vec![w("0000"), w("1111")]);
        assert!(rep.is_even());
        assert!(!LocalCode::from_generators(3, &[w("100")]).unwrap().is_even());
        let two = LocalCode::from_generators(4, &[w("1100"), w("0011")]).unwrap();
        assert_eq!(
            two.codewords(),
            vec![w("0000"), w("0011"), w("1100"), w("1111")]
        );
        assert!(two.is_even());
        assert!(LocalCode::from_generators(4, &[w("110")]).is_err());
    }

    #[test]
    fn even_validation() {
        let ring = TannerGraph::ring(4).unwrap();
        let code = TannerCode::with_spc(ring.clone()).unwrap();
        assert!(code.is_even());

        let mut locals: Vec<LocalCode> = (0..4).map(|_| LocalCode::spc(2).unwrap()).collect();
        locals[2] = LocalCode::full(2).unwrap();
        let bad = TannerCode::new(ring, locals, vec![]).unwrap();
        let report = bad.validate_even();
        assert!(!report.is_even());
        assert_eq!(report.odd_weight_checks, vec![2]);

        let odd = TannerGraph::new(3, vec![vec![0, 1], vec![1, 2], vec![2, 0], vec![0, 1, 2]]).unwrap();
        let report = TannerCode::with_spc(odd).unwrap().validate_even();
        assert_eq!(report.odd_degree_vars, vec![0, 1, 2]);
    }

    #[test]
    fn codeword_membership() {
        let code = TannerCode::with_spc(TannerGraph::ring(4).unwrap()).unwrap();
        assert!(code.is_codeword(&w("1111")).unwrap());
        assert!(!code.is_codeword(&w("1100")).unwrap());
        assert!(code.is_codeword(&w("0000")).unwrap());
        assert!(code.is_codeword(&w("000")).is_err());
    }

    #[test]
    fn enumerate_ring_and_k4() {
        let ring = TannerCode::with_spc(TannerGraph::ring(4).unwrap()).unwrap();
        assert_eq!(ring.enumerate_codewords().unwrap(), vec![w("0000"), w("1111")]);

        let k4 = TannerCode::with_spc(TannerGraph::k4_cycle_code()).unwrap();
        let words = k4.enumerate_codewords().unwrap();
        assert_eq!(words.len(), 8);
        let weights: Vec<usize> = words
            .iter()
            .map(|x| x.iter().filter(|&&b| b == 1).count())
            .collect();
        assert_eq!(weights.iter().filter(|&&wt| wt == 3).count(), 4);
        assert_eq!(weights.iter().filter(|&&wt| wt == 4).count(), 3);
    }

    #[test]
    fn enumeration_matches_direct_scan() {
        let g = crate::graph::construct_regular(12, 2, 3, 6, 4, 100).unwrap();
        let code = TannerCode::with_spc(g).unwrap();
        let scan: Vec<Word> = (0u64..1 << 12)
            .map(|m| mask_to_word(m, 12))
            .filter(|x| code.is_codeword(x).unwrap())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(code.enumerate_codewords().unwrap(), scan);
    }

    #[test]
    fn trivial_locals_give_zero_code() {
        let g = TannerGraph::ring(5).unwrap();
        let locals = (0..5).map(|_| LocalCode::zero(2).unwrap()).collect();
        let code = TannerCode::new(g, locals, vec![]).unwrap();
        assert_eq!(code.enumerate_codewords().unwrap(), vec![vec![0u8; 5]]);
    }

    #[test]
    fn ra_examples() {
        let one = build_ra_graph(&[2], Interleaver::Identity).unwrap();
        assert_eq!(one.n(), 3);
        assert_eq!(one.graph().n_checks(), 2);
        assert_eq!(one.graph().var_degree(0), 2);
        assert!(one.is_even());
        assert_eq!(one.puncture(), &[0]);

        let two = build_ra_graph(&[2, 2], Interleaver::Identity).unwrap();
        assert_eq!(two.n(), 6);
        assert_eq!(two.graph().n_checks(), 4);
        assert!(two.is_even());

        assert!(matches!(
            build_ra_graph(&[3], Interleaver::Identity),
            Err(Error::OddRepetition(3))
        ));
        assert!(matches!(
            build_ra_graph(&[2, 2], Interleaver::Explicit(vec![0, 1, 1, 3])),
            Err(Error::InvalidPermutation(4))
        ));
        let rnd = build_ra_graph(&[4, 2], Interleaver::Random(5)).unwrap();
        assert!(rnd.is_even());
    }
}
