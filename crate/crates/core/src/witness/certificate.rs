//! Witness certificates: the full construction output, sufficient for a
//! verifier to certify that m+1 .. m+k are all abundant without
//! factoring any m+i. Verification re-derives everything it checks from
//! the certificate alone.

use rayon::join;
use rug::ops::RemRounding;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use super::blocks::{build_blocks, Block, WitnessBudget};
use crate::arith::crt::combine_coprime;
use crate::arith::factor::Factorization;
use crate::arith::primes::{first_composite_sieved, is_prime};
use crate::arith::product::balanced_product_map;
use crate::error::Error;

pub const CERT_VERSION: &str = "v1";

/// Threshold above which block primality is re-checked by re-sieving
/// the whole covered range instead of per-prime Miller-Rabin.
const SIEVE_CHECK_THRESHOLD: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct CertBlock {
    pub index: u64,
    pub gcd_part: Factorization,
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CertificateRepr", into = "CertificateRepr")]
pub struct WitnessCertificate {
    pub version: String,
    pub modulus_m: Factorization,
    pub k: u64,
    pub alpha: Rational,
    pub blocks: Vec<CertBlock>,
    pub m: Integer,
}

impl WitnessCertificate {
    /// M * prod b_i; the CRT solution is bounded by this, and the run it
    /// certifies sits below this plus k (the implied x of the theorem).
    pub fn modulus_product(&self) -> Integer {
        let mut n = self.modulus_m.value();
        for b in &self.blocks {
            n *= balanced_product_map(&b.primes, &|q| q);
        }
        n
    }

    pub fn write_json(&self, path: &Path) -> Result<(), Error> {
        let file = std::fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer(&mut w, self)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self, Error> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(BufReader::new(file))?)
    }
}

/// Build blocks, solve the CRT system m = 0 (mod M), m + i = 0 (mod b_i),
/// and assemble the certificate. The per-block abundancy and greedy
/// minimality invariants are re-checked here with exact big-integer
/// arithmetic before the certificate is returned.
pub fn build_certificate(
    m: &Factorization,
    k: u64,
    alpha: &Rational,
    budget: &WitnessBudget,
) -> Result<WitnessCertificate, Error> {
    let scan_started = Instant::now();
    let blocks = build_blocks(m, k, alpha, budget)?;
    let total_primes: usize = blocks.iter().map(|b| b.primes.len()).sum();
    let chatty = total_primes > 100_000;
    if chatty {
        eprintln!(
            "witness: {} blocks over {} primes scanned in {:.1?}",
            blocks.len(),
            total_primes,
            scan_started.elapsed()
        );
    }
    let m_value = m.value();

    let mut parts: Vec<(Integer, Integer)> = Vec::with_capacity(blocks.len() + 1);
    parts.push((Integer::ZERO.clone(), m_value.clone()));
    for block in &blocks {
        let t = Instant::now();
        let (b_i, prod_q1) = join(
            || balanced_product_map(&block.primes, &|q| q),
            || balanced_product_map(&block.primes, &|q| q + 1),
        );
        exact_block_invariants(block, alpha, &b_i, &prod_q1)?;
        // signed residue: the combine step reduces it against b_i itself
        parts.push((Integer::from(-(block.index as i64)), b_i));
        if block.primes.len() > 100_000 {
            eprintln!(
                "witness: block {} exact check over {} primes in {:.1?}",
                block.index,
                block.primes.len(),
                t.elapsed()
            );
        }
    }
    // coprimality by construction: blocks consume strictly ascending
    // primes, all greater than M
    debug_assert!(blocks
        .windows(2)
        .all(|w| w[0].primes.last().unwrap() < w[1].primes.first().unwrap()));
    debug_assert!(m_value == 1 || blocks[0].primes[0] > m_value);

    let t = Instant::now();
    let m_solution = combine_coprime(parts);
    if chatty {
        eprintln!("witness: CRT solved in {:.1?}", t.elapsed());
    }

    Ok(WitnessCertificate {
        version: CERT_VERSION.to_string(),
        modulus_m: m.clone(),
        k,
        alpha: alpha.clone(),
        blocks: blocks
            .into_iter()
            .map(|b| CertBlock {
                index: b.index,
                gcd_part: b.gcd_part,
                primes: b.primes,
            })
            .collect(),
        m: m_solution,
    })
}

/// Exact abundancy sigma(a_l) >= alpha * a_l and greedy minimality
/// (dropping the last prime fails) for one block, given the block's
/// prime product and shifted-prime product.
fn exact_block_invariants(
    block: &Block,
    alpha: &Rational,
    prod_q: &Integer,
    prod_q1: &Integer,
) -> Result<(), Error> {
    let g_sigma = block.gcd_part.sigma();
    let g_value = block.gcd_part.value();
    // sigma(a) = sigma(g) * prod (q+1), a = g * prod q
    let lhs = Integer::from(alpha.denom() * &g_sigma) * prod_q1;
    let rhs = Integer::from(alpha.numer() * &g_value) * prod_q;
    if lhs < rhs {
        return Err(Error::InvalidInput(format!(
            "internal: block {} is not abundant",
            block.index
        )));
    }
    if let Some((&last, _)) = block.primes.split_last() {
        if block.primes.len() > 1 {
            let lhs_short = lhs / (last + 1);
            let rhs_short = rhs / last;
            if lhs_short >= rhs_short {
                return Err(Error::InvalidInput(format!(
                    "internal: block {} is not minimal",
                    block.index
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub accepted: bool,
    pub checks: Vec<CheckResult>,
    /// Name and detail of the first failed check, if any.
    pub first_failure: Option<String>,
}

impl Verdict {
    fn pass(checks: Vec<CheckResult>) -> Self {
        Verdict {
            accepted: true,
            checks,
            first_failure: None,
        }
    }

    fn fail(mut checks: Vec<CheckResult>, name: &'static str, detail: String) -> Self {
        checks.push(CheckResult {
            name,
            passed: false,
            detail: detail.clone(),
        });
        Verdict {
            accepted: false,
            checks,
            first_failure: Some(format!("{name}: {detail}")),
        }
    }
}

/// Independently re-check a certificate. Checks run in order and stop at
/// the first failure:
///
/// 1. structure - version, block indexing, ascending prime lists
/// 2. prime_range - every block prime exceeds M
/// 3. prime_disjointness - no prime is used twice
/// 4. primality - every block prime is prime (re-sieved when dense)
/// 5. gcd_parts - stored (i, M) matches the modulus
/// 6. abundancy - sigma(a_i) >= alpha a_i by exact big-integer products
/// 7. congruences - m = 0 mod M and m + i = 0 mod b_i
/// 8. bound - 1 <= m <= M prod b_i
///
/// Passing certifies that m+1 .. m+k are alpha-abundant, because a_i
/// divides m+i and the abundancy index is monotone under divisibility.
pub fn verify_certificate(cert: &WitnessCertificate) -> Verdict {
    let mut checks = Vec::new();
    let ok = |checks: &mut Vec<CheckResult>, name: &'static str, detail: String| {
        checks.push(CheckResult {
            name,
            passed: true,
            detail,
        });
    };

    // structure
    if cert.version != CERT_VERSION {
        return Verdict::fail(
            checks,
            "structure",
            format!("unknown version {:?}", cert.version),
        );
    }
    if cert.k < 1 || cert.blocks.len() as u64 != cert.k {
        return Verdict::fail(
            checks,
            "structure",
            format!("k = {} but {} blocks", cert.k, cert.blocks.len()),
        );
    }
    for (i, b) in cert.blocks.iter().enumerate() {
        if b.index != i as u64 + 1 {
            return Verdict::fail(
                checks,
                "structure",
                format!("block {} has index {}", i, b.index),
            );
        }
        if b.primes.is_empty() {
            return Verdict::fail(checks, "structure", format!("block {} is empty", b.index));
        }
        if !b.primes.windows(2).all(|w| w[0] < w[1]) {
            return Verdict::fail(
                checks,
                "structure",
                format!("block {} primes not strictly ascending", b.index),
            );
        }
    }
    if cert.alpha < 1 {
        return Verdict::fail(checks, "structure", format!("alpha {} below 1", cert.alpha));
    }
    if cert.m < 1 {
        return Verdict::fail(checks, "structure", format!("m = {} not positive", cert.m));
    }
    ok(
        &mut checks,
        "structure",
        format!("{} blocks, version {}", cert.k, cert.version),
    );

    // prime_range
    let m_value = cert.modulus_m.value();
    for b in &cert.blocks {
        if let Some(&q) = b.primes.iter().find(|&&q| q <= m_value) {
            return Verdict::fail(
                checks,
                "prime_range",
                format!("prime {q} in block {} does not exceed M", b.index),
            );
        }
    }
    ok(
        &mut checks,
        "prime_range",
        "all block primes exceed M".into(),
    );

    // prime_disjointness
    let mut all_primes: Vec<u64> = cert
        .blocks
        .iter()
        .flat_map(|b| b.primes.iter().copied())
        .collect();
    all_primes.sort_unstable();
    if let Some(w) = all_primes.windows(2).find(|w| w[0] == w[1]) {
        return Verdict::fail(
            checks,
            "prime_disjointness",
            format!("prime {} appears twice", w[0]),
        );
    }
    ok(
        &mut checks,
        "prime_disjointness",
        format!("{} distinct primes", all_primes.len()),
    );

    // primality: re-sieving the covered range is faster for a dense set,
    // but a sparse set (possible in a hostile certificate) must not make
    // the verifier sieve an enormous span
    let span = all_primes.last().unwrap() - all_primes.first().unwrap();
    let dense = span / all_primes.len() as u64 <= 1_000;
    let composite = if all_primes.len() >= SIEVE_CHECK_THRESHOLD && dense {
        first_composite_sieved(&all_primes)
    } else {
        all_primes.iter().copied().find(|&q| !is_prime(q))
    };
    if let Some(q) = composite {
        return Verdict::fail(checks, "primality", format!("{q} is composite"));
    }
    ok(&mut checks, "primality", "all block entries prime".into());

    // gcd_parts
    for b in &cert.blocks {
        let expected = cert.modulus_m.gcd_factorization(b.index);
        if expected != b.gcd_part {
            return Verdict::fail(
                checks,
                "gcd_parts",
                format!(
                    "block {}: gcd part is {}, expected {}",
                    b.index, b.gcd_part, expected
                ),
            );
        }
    }
    ok(&mut checks, "gcd_parts", "stored gcd parts match M".into());

    // abundancy + block products (kept for the congruence check)
    let mut block_moduli: Vec<Integer> = Vec::with_capacity(cert.blocks.len());
    for b in &cert.blocks {
        let (prod_q1, prod_q) = join(
            || balanced_product_map(&b.primes, &|q| q + 1),
            || balanced_product_map(&b.primes, &|q| q),
        );
        let lhs = Integer::from(cert.alpha.denom() * &b.gcd_part.sigma()) * prod_q1;
        let rhs = Integer::from(cert.alpha.numer() * &b.gcd_part.value()) * &prod_q;
        if lhs < rhs {
            return Verdict::fail(
                checks,
                "abundancy",
                format!("sigma(a_{0}) < alpha * a_{0}", b.index),
            );
        }
        block_moduli.push(prod_q);
    }
    ok(
        &mut checks,
        "abundancy",
        "sigma(a_i) >= alpha * a_i for every block".into(),
    );

    // congruences
    if !cert.m.is_divisible(&m_value) {
        return Verdict::fail(checks, "congruences", "m is not 0 mod M".into());
    }
    for (b, b_i) in cert.blocks.iter().zip(&block_moduli) {
        let r = Integer::from(&cert.m + b.index).rem_euc(b_i);
        if r != 0 {
            return Verdict::fail(
                checks,
                "congruences",
                format!("m + {} is not 0 mod b_{}", b.index, b.index),
            );
        }
    }
    ok(
        &mut checks,
        "congruences",
        "m = 0 (M), m + i = 0 (b_i)".into(),
    );

    // bound
    let mut n = m_value;
    for b_i in &block_moduli {
        n *= b_i;
    }
    if cert.m > n {
        return Verdict::fail(
            checks,
            "bound",
            format!("m exceeds M * prod b_i ({} bits)", n.significant_bits()),
        );
    }
    ok(&mut checks, "bound", "1 <= m <= M * prod b_i".into());

    Verdict::pass(checks)
}

/// Wire form: decimal strings for primes and m, "num/den" for alpha.
#[derive(Serialize, Deserialize)]
struct CertBlockRepr {
    index: u64,
    gcd_part: Factorization,
    primes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[allow(non_snake_case)]
struct CertificateRepr {
    version: String,
    modulus_M: Factorization,
    k: u64,
    alpha: String,
    blocks: Vec<CertBlockRepr>,
    m: String,
}

impl From<WitnessCertificate> for CertificateRepr {
    fn from(c: WitnessCertificate) -> Self {
        CertificateRepr {
            version: c.version,
            modulus_M: c.modulus_m,
            k: c.k,
            alpha: format!("{}/{}", c.alpha.numer(), c.alpha.denom()),
            blocks: c
                .blocks
                .into_iter()
                .map(|b| CertBlockRepr {
                    index: b.index,
                    gcd_part: b.gcd_part,
                    primes: b.primes.iter().map(|q| q.to_string()).collect(),
                })
                .collect(),
            m: c.m.to_string(),
        }
    }
}

impl TryFrom<CertificateRepr> for WitnessCertificate {
    type Error = Error;

    fn try_from(r: CertificateRepr) -> Result<Self, Error> {
        let alpha: Rational = r
            .alpha
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad alpha {:?}", r.alpha)))?;
        let m: Integer =
            r.m.parse()
                .map_err(|_| Error::InvalidInput("bad m string".into()))?;
        let mut blocks = Vec::with_capacity(r.blocks.len());
        for b in r.blocks {
            let mut primes = Vec::with_capacity(b.primes.len());
            for s in &b.primes {
                primes.push(
                    s.parse::<u64>()
                        .map_err(|_| Error::InvalidInput(format!("bad prime {s:?}")))?,
                );
            }
            blocks.push(CertBlock {
                index: b.index,
                gcd_part: b.gcd_part,
                primes,
            });
        }
        Ok(WitnessCertificate {
            version: r.version,
            modulus_m: r.modulus_M,
            k: r.k,
            alpha,
            blocks,
            m,
        })
    }
}
