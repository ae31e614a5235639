//! Invertible mapping between short byte strings and target-group elements.
//!
//! The non-hybrid schemes encrypt elements of `G_T`, not bytes. The CLI maps
//! a short message to the exponent `2^(8*len) | int(message)` (the marker
//! bit makes the length recoverable) and inverts it after decryption by a
//! bounded discrete-log search: trivial on the mock backend, baby-step
//! giant-step on the curve. Capacity is deliberately small — a few bytes —
//! and longer payloads belong to the hybrid scheme.

use std::collections::HashMap;

use aibe::groups::{BackendKind, BilinearContext, TargetElement};
use anyhow::{bail, Result};

/// Maximum message length in bytes for this context.
pub fn capacity(ctx: &BilinearContext) -> usize {
    match ctx.backend() {
        // Exponent must stay below p: 8*len + 1 marker bit.
        BackendKind::Mock => ((ctx.order_bits().saturating_sub(2)) / 8) as usize,
        // Bounded by the discrete-log search, not the group order.
        BackendKind::Curve => 3,
    }
}

pub fn encode(ctx: &BilinearContext, message: &[u8]) -> Result<TargetElement> {
    let cap = capacity(ctx);
    if message.len() > cap {
        bail!(
            "message is {} bytes but this scheme carries at most {cap} on this backend; \
             use the cca scheme for arbitrary payloads",
            message.len()
        );
    }
    let mut exponent: u64 = 1;
    for byte in message {
        exponent = (exponent << 8) | *byte as u64;
    }
    Ok(ctx.gt_generator().exp(&ctx.scalar_from_u64(exponent)))
}

pub fn decode(ctx: &BilinearContext, element: &TargetElement) -> Result<Vec<u8>> {
    let cap = capacity(ctx);
    let bound: u64 = 1 << (8 * cap + 1);
    let exponent = match ctx.backend() {
        BackendKind::Mock => element
            .mock_exponent()
            .expect("mock backend exposes exponents"),
        BackendKind::Curve => bounded_dlog(ctx, element, bound)?,
    };
    if exponent >= bound || exponent == 0 {
        bail!("decrypted element does not carry a CLI-encoded message");
    }
    // Strip the marker bit; everything below it is the message.
    let len = (63 - exponent.leading_zeros()) as usize / 8;
    let mut out = vec![0u8; len];
    let mut value = exponent & !(1 << (8 * len));
    for slot in out.iter_mut().rev() {
        *slot = (value & 0xff) as u8;
        value >>= 8;
    }
    Ok(out)
}

/// Baby-step giant-step over `[0, bound)` in the target group.
fn bounded_dlog(ctx: &BilinearContext, element: &TargetElement, bound: u64) -> Result<u64> {
    let m = (bound as f64).sqrt().ceil() as u64;
    let gen = ctx.gt_generator();
    let mut table = HashMap::with_capacity(m as usize);
    let mut step = ctx.identity_target();
    for j in 0..m {
        table.insert(step.to_bytes(), j);
        step = step.mul(&gen);
    }
    // gamma = element * gen^{-m*i}
    let giant = gen.exp(&ctx.scalar_from_u64(m)).inverse();
    let mut gamma = *element;
    for i in 0..=m {
        if let Some(j) = table.get(&gamma.to_bytes()) {
            return Ok(i * m + j);
        }
        gamma = gamma.mul(&giant);
    }
    bail!("decrypted element does not carry a CLI-encoded message")
}
