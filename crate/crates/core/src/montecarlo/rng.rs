use rand_core::{impls, RngCore};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix_gamma(z: u64) -> u64 {
    let g = mix64(z) | 1;
    if (g ^ (g >> 1)).count_ones() < 24 {
        g ^ 0xaaaa_aaaa_aaaa_aaaa
    } else {
        g
    }
}

/// SplitMix-style generator addressed by `(seed, stream)`.
///
/// Every stream is an independent sequence, so path `i` draws the same
/// numbers whatever thread simulates it and in whatever order.
#[derive(Debug, Clone)]
pub struct CounterRng {
    state: u64,
    gamma: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(seed.wrapping_add(GOLDEN));
        CounterRng {
            state: mix64(key ^ mix64(stream.wrapping_mul(GOLDEN).wrapping_add(1))),
            gamma: mix_gamma(key.rotate_left(29) ^ stream.wrapping_add(0x632b_e59b_d9b4_e019)),
        }
    }
}

impl RngCore for CounterRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(self.gamma);
        mix64(self.state)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        impls::fill_bytes_via_next(self, dst)
    }
}
