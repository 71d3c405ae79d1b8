//! The constants `K_{k,r}` from the two-way subset recursion:
//! `K_{1,r} = r`, `K_{2,r} = 2r + 8`, `K_{k+1,r} = K_{k,2r+1}` for `k >= 2`.

use num_bigint::BigUint;

/// Exact `K_{k,r}`; `k` and `r` must be at least 1.
pub fn kkr_constant(k: u32, r: u64) -> BigUint {
    assert!(k >= 1 && r >= 1, "K_{{k,r}} needs k, r >= 1");
    let mut r = BigUint::from(r);
    if k == 1 {
        return r;
    }
    // unwind K_{k,r} = K_{2, r'} with r' obtained by k-2 applications of r -> 2r+1
    for _ in 2..k {
        r = r * 2u32 + 1u32;
    }
    r * 2u32 + 8u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(kkr_constant(1, 7), BigUint::from(7u32));
        assert_eq!(kkr_constant(2, 2), BigUint::from(12u32));
        assert_eq!(kkr_constant(15, 2), BigUint::from(49158u32));
    }

    #[test]
    fn recursion_holds() {
        for k in 2..20 {
            for r in 1..30 {
                assert_eq!(kkr_constant(k + 1, r), kkr_constant(k, 2 * r + 1));
            }
        }
    }

    #[test]
    fn large_arguments_do_not_overflow() {
        let big = kkr_constant(200, u64::MAX);
        assert!(big.bits() > 260);
    }
}
