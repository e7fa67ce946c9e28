/// Primes just below 2^62, used by the modular elimination routines.
pub const PRIMES: [u64; 96] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
    4611686018427387701,
    4611686018427387631,
    4611686018427387617,
    4611686018427387587,
    4611686018427387461,
    4611686018427387421,
    4611686018427387409,
    4611686018427387329,
    4611686018427387323,
    4611686018427387301,
    4611686018427387271,
    4611686018427387241,
    4611686018427387139,
    4611686018427387131,
    4611686018427387127,
    4611686018427387113,
    4611686018427387091,
    4611686018427387073,
    4611686018427386981,
    4611686018427386923,
    4611686018427386911,
    4611686018427386903,
    4611686018427386897,
    4611686018427386887,
    4611686018427386707,
    4611686018427386663,
    4611686018427386611,
    4611686018427386551,
    4611686018427386471,
    4611686018427386389,
    4611686018427386351,
    4611686018427386329,
    4611686018427386323,
    4611686018427386309,
    4611686018427386287,
    4611686018427386231,
    4611686018427386207,
    4611686018427386203,
    4611686018427386201,
    4611686018427386081,
    4611686018427386023,
    4611686018427385993,
    4611686018427385981,
    4611686018427385861,
    4611686018427385831,
    4611686018427385801,
    4611686018427385763,
    4611686018427385717,
    4611686018427385687,
    4611686018427385657,
    4611686018427385619,
    4611686018427385553,
    4611686018427385537,
    4611686018427385529,
    4611686018427385507,
    4611686018427385483,
    4611686018427385393,
    4611686018427385363,
    4611686018427385321,
    4611686018427385243,
    4611686018427385229,
    4611686018427385151,
    4611686018427385127,
    4611686018427385111,
    4611686018427385043,
    4611686018427385013,
    4611686018427384977,
    4611686018427384881,
    4611686018427384863,
    4611686018427384683,
    4611686018427384653,
    4611686018427384649,
    4611686018427384647,
    4611686018427384641,
    4611686018427384587,
    4611686018427384527,
    4611686018427384383,
    4611686018427384367,
    4611686018427384359,
    4611686018427384353,
    4611686018427384341,
    4611686018427384233,
    4611686018427384199,
    4611686018427384137,
    4611686018427384107,
    4611686018427384101,
    4611686018427384031,
    4611686018427383971,
];
