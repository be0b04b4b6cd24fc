//! In-place fast Walsh–Hadamard transform.
//!
//! The kernel is the unnormalized Hadamard matrix H = [[1, 1], [1, -1]]
//! applied along every bit axis, so a length-n buffer (n a power of two)
//! transforms in n·log2(n) additions. Callers that want the symmetric
//! convention divide by n once at the end; applying the transform twice
//! multiplies the input by n.

/// Apply the unnormalized Walsh–Hadamard transform to `data` in place.
///
/// `data.len()` must be a power of two; length 1 is the identity.
pub fn fwht(data: &mut [f64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two(), "FWHT length must be a power of two");
    let mut h = 1;
    while h < n {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let x = *a;
                let y = *b;
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Entry (row, col) of the unnormalized Walsh–Hadamard matrix H^{⊗M}:
/// (-1)^{popcount(row & col)}. Used by the naive-oracle tests; the transform
/// above is the production path.
pub fn hadamard_entry(row: usize, col: usize) -> f64 {
    if (row & col).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_transforms_to_constant() {
        let mut data = [0.0; 8];
        data[0] = 1.0;
        fwht(&mut data);
        assert_eq!(data, [1.0; 8]);
    }

    #[test]
    fn matches_matrix_definition() {
        let input = [0.5, -1.25, 3.0, 0.125, -2.0, 1.0, 0.75, -0.5];
        let mut data = input;
        fwht(&mut data);
        for (row, &got) in data.iter().enumerate() {
            let want: f64 = input
                .iter()
                .enumerate()
                .map(|(col, &x)| hadamard_entry(row, col) * x)
                .sum();
            assert!((got - want).abs() < 1e-12, "row {row}: {got} vs {want}");
        }
    }

    #[test]
    fn applied_twice_scales_by_length() {
        let input = [1.0, 2.0, -3.0, 4.0];
        let mut data = input;
        fwht(&mut data);
        fwht(&mut data);
        for (got, want) in data.iter().zip(input.iter()) {
            assert_eq!(*got, want * 4.0);
        }
    }

    #[test]
    fn length_one_is_identity() {
        let mut data = [7.0];
        fwht(&mut data);
        assert_eq!(data, [7.0]);
    }
}
