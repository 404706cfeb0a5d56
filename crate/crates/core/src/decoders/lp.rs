use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::simplex::Tableau;
use crate::channels::LlrVector;
use crate::codes::{TannerCode, Word};
use crate::error::{Error, Result};
use crate::numeric::{big_from_f64, big_to_string};

/// Largest total number of local codewords accepted by [`build_lp`].
pub const MAX_LP_LOCAL_WORDS: usize = 100_000;

/// Indicator formulation: one `x_i` per variable and one `w_{j,c}` per local
/// codeword, with `Σ_c w_{j,c} = 1` per check and
/// `x_i = Σ_{c: c_t = 1} w_{j,c}` per edge `(i, j)` with label `t`.
#[derive(Clone, Debug)]
pub struct LpModel {
    n: usize,
    n_checks: usize,
    n_cols: usize,
    w_offset: Vec<usize>,
    local_words: Vec<Vec<Word>>,
    /// Sparse rows: convexity rows first, then one consistency row per edge.
    rows: Vec<Vec<(usize, i64)>>,
    rhs: Vec<i64>,
}

impl LpModel {
    pub fn n_variables(&self) -> usize {
        self.n_cols
    }

    pub fn n_x(&self) -> usize {
        self.n
    }

    pub fn n_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn n_convexity(&self) -> usize {
        self.n_checks
    }

    pub fn n_consistency(&self) -> usize {
        self.rows.len() - self.n_checks
    }

    /// Column of `w_{j,k}`, `k` indexing the lexicographic codeword list.
    pub fn w_index(&self, j: usize, k: usize) -> usize {
        self.w_offset[j] + k
    }

    pub fn local_words(&self, j: usize) -> &[Word] {
        &self.local_words[j]
    }

    fn dense(&self) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let a = self
            .rows
            .iter()
            .map(|row| {
                let mut d = vec![BigRational::zero(); self.n_cols];
                for &(j, v) in row {
                    d[j] = int(v);
                }
                d
            })
            .collect();
        (a, self.rhs.iter().map(|&v| int(v)).collect())
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn build_lp(tc: &TannerCode) -> Result<LpModel> {
    let g = tc.graph();
    let total: usize = tc.locals().iter().map(|c| c.size()).sum();
    if total > MAX_LP_LOCAL_WORDS {
        return Err(Error::GuardExceeded(format!(
            "{total} local codewords (limit {MAX_LP_LOCAL_WORDS})"
        )));
    }
    let n = g.n_vars();
    let mut w_offset = Vec::with_capacity(g.n_checks());
    let mut local_words = Vec::with_capacity(g.n_checks());
    let mut next = n;
    for j in 0..g.n_checks() {
        w_offset.push(next);
        let words = tc.local(j).codewords();
        next += words.len();
        local_words.push(words);
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (j, words) in local_words.iter().enumerate() {
        rows.push((0..words.len()).map(|k| (w_offset[j] + k, 1)).collect());
        rhs.push(1);
    }
    for (j, words) in local_words.iter().enumerate() {
        for (t, &v) in g.check(j).iter().enumerate() {
            let mut row = vec![(v, 1)];
            row.extend(
                words
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c[t] == 1)
                    .map(|(k, _)| (w_offset[j] + k, -1)),
            );
            rows.push(row);
            rhs.push(0);
        }
    }
    Ok(LpModel {
        n,
        n_checks: g.n_checks(),
        n_cols: next,
        w_offset,
        local_words,
        rows,
        rhs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<BigRational>,
    pub objective: BigRational,
    pub integral: bool,
    /// No other optimal point has a different `x`.
    pub unique: bool,
}

impl LpSolution {
    /// The solution as a binary word when it is integral.
    pub fn word(&self) -> Option<Word> {
        self.integral
            .then(|| self.x.iter().map(|v| u8::from(v.is_one())).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "x": self.x.iter().map(big_to_string).collect::<Vec<_>>(),
            "objective": big_to_string(&self.objective),
            "integral": self.integral,
            "unique": self.unique,
        })
    }
}

/// A model together with a feasible starting basis, reused across
/// objectives.
#[derive(Clone, Debug)]
pub struct LpDecoder {
    model: LpModel,
    start: Tableau,
}

impl LpDecoder {
    pub fn new(tc: &TannerCode) -> Result<Self> {
        let model = build_lp(tc)?;
        let (a, b) = model.dense();
        let start = Tableau::feasible(&a, &b, model.n_cols)?;
        Ok(LpDecoder { model, start })
    }

    pub fn model(&self) -> &LpModel {
        &self.model
    }

    pub fn decode(&self, llr: &[BigRational]) -> Result<LpSolution> {
        let n = self.model.n;
        if llr.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: llr.len(),
            });
        }
        let cols = self.model.n_cols;
        let mut cost = vec![BigRational::zero(); cols];
        cost[..n].clone_from_slice(llr);
        let mut t = self.start.clone();
        t.optimize(&cost, &vec![true; cols])?;
        let z = t.solution();
        let x = z[..n].to_vec();
        let objective = t.objective(&cost);
        let integral = x.iter().all(|v| v.is_zero() || v.is_one());
        // optimal face: nonbasic columns with positive reduced cost stay at 0
        let face: Vec<bool> = t.reduced_costs(&cost).iter().map(Zero::is_zero).collect();
        let unique = if integral {
            // minimizing Σ_{x*=1} x_i - Σ_{x*=0} x_i over the face reaches
            // its value at x* only when x* is the sole point of the face
            let mut dist = vec![BigRational::zero(); cols];
            for i in 0..n {
                dist[i] = if x[i].is_one() { int(1) } else { int(-1) };
            }
            let at_star: BigRational = x.iter().sum();
            let mut probe = t.clone();
            probe.optimize(&dist, &face)?;
            probe.objective(&dist) == at_star
        } else {
            let mut same = true;
            for i in 0..n {
                for sign in [1, -1] {
                    let mut c = vec![BigRational::zero(); cols];
                    c[i] = int(sign);
                    let mut probe = t.clone();
                    probe.optimize(&c, &face)?;
                    if probe.solution()[i] != x[i] {
                        same = false;
                        break;
                    }
                }
                if !same {
                    break;
                }
            }
            same
        };
        Ok(LpSolution {
            x,
            objective,
            integral,
            unique,
        })
    }

    /// Decodes real LLRs through their exact binary-fraction values.
    pub fn decode_f64(&self, llr: &[f64]) -> Result<LpSolution> {
        let exact = llr
            .iter()
            .map(|&v| {
                big_from_f64(v)
                    .ok_or_else(|| Error::InvalidParameter(format!("LLR {v} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.decode(&exact)
    }
}

pub fn decode_lp(tc: &TannerCode, l: &LlrVector) -> Result<LpSolution> {
    LpDecoder::new(tc)?.decode_f64(l.values())
}

pub fn decode_lp_exact(tc: &TannerCode, llr: &[BigRational]) -> Result<LpSolution> {
    LpDecoder::new(tc)?.decode(llr)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub trials: usize,
    /// Optima whose projection left some local convex hull.
    pub violations: usize,
    pub fractional: usize,
    /// Distinct fractional optima, as `num/den` lists.
    pub pseudocodewords: Vec<Vec<String>>,
}

/// Whether `point` is a convex combination of `words`.
fn in_hull(words: &[Word], point: &[BigRational]) -> Result<bool> {
    let k = words.len();
    let mut a = vec![vec![int(1); k]];
    let mut b = vec![int(1)];
    for (t, p) in point.iter().enumerate() {
        a.push(words.iter().map(|c| int(c[t] as i64)).collect());
        b.push(p.clone());
    }
    match Tableau::feasible(&a, &b, k) {
        Ok(_) => Ok(true),
        Err(Error::Infeasible) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Solves `count` random rational objectives and checks every optimum
/// against each local convex hull separately.
pub fn lp_vertex_audit(tc: &TannerCode, count: usize, seed: u64) -> Result<AuditReport> {
    let dec = LpDecoder::new(tc)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AuditReport::default();
    let g = tc.graph();
    for _ in 0..count {
        let llr: Vec<BigRational> = (0..tc.n())
            .map(|_| {
                BigRational::new(
                    BigInt::from(rng.random_range(-10i64..=10)),
                    BigInt::from(rng.random_range(1i64..=4)),
                )
            })
            .collect();
        let sol = dec.decode(&llr)?;
        report.trials += 1;
        for j in 0..g.n_checks() {
            let local: Vec<BigRational> = g.check(j).iter().map(|&v| sol.x[v].clone()).collect();
            if !in_hull(dec.model.local_words(j), &local)? {
                report.violations += 1;
                break;
            }
        }
        if !sol.integral {
            report.fractional += 1;
            let text: Vec<String> = sol.x.iter().map(big_to_string).collect();
            if !report.pseudocodewords.contains(&text) {
                report.pseudocodewords.push(text);
            }
        }
    }
    Ok(report)
}
