//! Published words used as reference inputs by tests, benchmarks and the CLI.

use crate::pword::CycPWord;

/// The binary upcycle for `n = 4`: `(001⋄110⋄)`.
pub const U4: &str = "(001*110*)";

/// Seven pairwise inequivalent binary upcycles for `n = 8`, `d = 1`.
pub const SEVEN_UPCYCLES: [&str; 7] = [
    "(0000010*1111101*0010010*1101101*1110000*0001111*1110011*0101100*1110010*0101001*1000110*0100001*1011110*0101101*0000110*1101001*)",
    "(0000001*1111110*0111001*1110110*0100001*1011110*0010001*1101110*0101001*1100100*0011011*1100110*0110100*1001010*0110000*1001110*)",
    "(0000001*1101110*1111001*0101110*0010101*1101010*0010001*0001110*1011001*0000110*1110001*0100111*1011000*0100110*1010001*1111110*)",
    "(0000001*0111110*1010001*0100110*1011001*0101110*0010101*1101010*0010001*1001110*0110001*1101110*1000011*0111100*1000001*1111110*)",
    "(0100001*1011110*0101101*1110011*0101100*1110010*0101001*1000110*0100000*1011101*0010010*1111101*0110000*0001111*1110000*1001101*)",
    "(0000001*0111101*1010010*1101101*0010110*1100001*1010110*0100001*0010010*0111001*1000110*0111100*1010011*0111110*1000001*1111110*)",
    "(1011010*1110011*0100000*0011111*0100100*1011011*0101100*1110111*0101000*1110001*0001010*1100000*1011111*1100001*0011010*0100101*)",
];

/// The `(4,4,1)` upcycle obtained from [`U4`] by the alphabet multiplier.
pub const U4_TIMES_2: &str = "(001*110*003*112*021*130*023*132*201*310*203*312*221*330*223*332*)";

/// The two De Bruijn lifts of [`U4`].
pub const U4_LIFTS: [&str; 2] = ["(0010110000111101)", "(0010110100111100)"];

/// A De Bruijn cycle for `{0,1}^4` that is not a lift of [`U4`].
pub const U4_NON_LIFT: &str = "(0010111101001100)";

pub fn u4() -> CycPWord {
    CycPWord::parse(U4, 2).expect("fixture parses")
}

pub fn seven_upcycles() -> Vec<CycPWord> {
    SEVEN_UPCYCLES
        .iter()
        .map(|s| CycPWord::parse(s, 2).expect("fixture parses"))
        .collect()
}

pub fn u4_times_2() -> CycPWord {
    CycPWord::parse(U4_TIMES_2, 4).expect("fixture parses")
}

pub fn u4_lifts() -> Vec<CycPWord> {
    U4_LIFTS
        .iter()
        .map(|s| CycPWord::parse(s, 2).expect("fixture parses"))
        .collect()
}

/// [`U4_TIMES_2`] after the cross-join with `x = 3⋄1`, `y = 21⋄` at 1-based
/// positions 11, 18, 27, 50.
pub const U4_TIMES_2_CROSS_JOINED: &str =
    "(001*110*003*132*201*310*203*312*221*130*023*112*021*330*223*332*)";
