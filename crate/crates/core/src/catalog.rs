//! Cryptographic workload catalog.
//!
//! Key, ciphertext/signature sizes (bytes) and per-bit CPU cost of the
//! schemes a device may run. The per-bit cycle counts are Cortex-M4
//! encryption/signing measurements for a 256-bit message; they are what makes
//! hash-based signing (SPHINCS+) five orders of magnitude heavier than
//! classical RSA and the reason offloading pays off. The two classical rows
//! are kept for display and comparison but are never assigned as device
//! workloads: workload draws cover the post-quantum rows only.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand_core::RngCore;

use crate::error::Error;

/// One catalog row: artifact sizes and per-bit compute cost of a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PqcScheme {
    pub name: &'static str,
    /// NIST security category; 0 where the notion does not apply (classical).
    pub security_level: u8,
    pub pub_key_bytes: u32,
    pub priv_key_bytes: u32,
    pub ct_or_sig_bytes: u32,
    /// CPU cycles per message bit for encryption or signing.
    pub cycles_per_bit: u64,
}

pub const SCHEMES: [PqcScheme; 13] = [
    PqcScheme { name: "RSA-2048", security_level: 0, pub_key_bytes: 256, priv_key_bytes: 256, ct_or_sig_bytes: 256, cycles_per_bit: 113 },
    PqcScheme { name: "ECC-256", security_level: 0, pub_key_bytes: 64, priv_key_bytes: 32, ct_or_sig_bytes: 256, cycles_per_bit: 281 },
    PqcScheme { name: "Kyber-512", security_level: 1, pub_key_bytes: 800, priv_key_bytes: 1632, ct_or_sig_bytes: 768, cycles_per_bit: 2193 },
    PqcScheme { name: "Kyber-768", security_level: 3, pub_key_bytes: 1184, priv_key_bytes: 2400, ct_or_sig_bytes: 1088, cycles_per_bit: 3577 },
    PqcScheme { name: "Kyber-1024", security_level: 5, pub_key_bytes: 1568, priv_key_bytes: 3264, ct_or_sig_bytes: 1568, cycles_per_bit: 5499 },
    PqcScheme { name: "Dilithium-2", security_level: 1, pub_key_bytes: 1312, priv_key_bytes: 2528, ct_or_sig_bytes: 2420, cycles_per_bit: 24051 },
    PqcScheme { name: "Dilithium-3", security_level: 3, pub_key_bytes: 1952, priv_key_bytes: 4000, ct_or_sig_bytes: 3293, cycles_per_bit: 36287 },
    PqcScheme { name: "Dilithium-5", security_level: 5, pub_key_bytes: 2592, priv_key_bytes: 4864, ct_or_sig_bytes: 4595, cycles_per_bit: 33085 },
    PqcScheme { name: "Falcon-512", security_level: 1, pub_key_bytes: 897, priv_key_bytes: 1281, ct_or_sig_bytes: 690, cycles_per_bit: 148791 },
    PqcScheme { name: "Falcon-1024", security_level: 3, pub_key_bytes: 1793, priv_key_bytes: 2305, ct_or_sig_bytes: 1330, cycles_per_bit: 326105 },
    PqcScheme { name: "SPHINCS+-128f", security_level: 1, pub_key_bytes: 32, priv_key_bytes: 64, ct_or_sig_bytes: 17088, cycles_per_bit: 2038919 },
    PqcScheme { name: "SPHINCS+-192f", security_level: 3, pub_key_bytes: 48, priv_key_bytes: 96, ct_or_sig_bytes: 35664, cycles_per_bit: 2686303 },
    PqcScheme { name: "SPHINCS+-256f", security_level: 5, pub_key_bytes: 64, priv_key_bytes: 128, ct_or_sig_bytes: 49856, cycles_per_bit: 6070970 },
];

/// Index of the first post-quantum row; rows before it are classical.
pub const PQC_START: usize = 2;

/// Number of post-quantum rows eligible for workload assignment.
pub const PQC_COUNT: usize = SCHEMES.len() - PQC_START;

/// Case-insensitive lookup by canonical name.
pub fn lookup(name: &str) -> Result<&'static PqcScheme, Error> {
    SCHEMES
        .iter()
        .find(|s| s.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownScheme {
            name: String::from(name),
            suggestion: String::from(nearest(name)),
        })
}

/// Draws the per-bit cycle cost of a uniformly chosen post-quantum scheme.
/// One `u64` is consumed per draw.
pub fn sample_cycles<R: RngCore>(rng: &mut R) -> u64 {
    let idx = PQC_START + (rng.next_u64() % PQC_COUNT as u64) as usize;
    SCHEMES[idx].cycles_per_bit
}

/// The set of cycle costs `sample_cycles` can return.
pub fn pqc_cycle_values() -> Vec<u64> {
    SCHEMES[PQC_START..].iter().map(|s| s.cycles_per_bit).collect()
}

/// CSV rendering of the whole catalog, classical rows included.
pub fn to_csv() -> String {
    let mut out = String::from("name,level,pub,priv,ct_sig,cycles_per_bit\n");
    for s in &SCHEMES {
        out += &format!(
            "{},{},{},{},{},{}\n",
            s.name, s.security_level, s.pub_key_bytes, s.priv_key_bytes, s.ct_or_sig_bytes, s.cycles_per_bit
        );
    }
    out
}

fn nearest(name: &str) -> &'static str {
    SCHEMES
        .iter()
        .min_by_key(|s| levenshtein(&name.to_ascii_lowercase(), &s.name.to_ascii_lowercase()))
        .map(|s| s.name)
        .unwrap_or(SCHEMES[0].name)
}

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = alloc::vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
