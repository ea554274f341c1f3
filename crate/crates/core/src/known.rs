//! Reference values: point counts, small-height moduli points,
//! and the confusion matrices and classification report used as metric
//! fixtures.

/// Number of points of weighted height `<= h` with `J10 != 0`, for `h = 1..=10`.
pub const SEXTIC_COUNTS: [u64; 10] = [
    40,
    24_862,
    1_781_202,
    39_251_668,
    440_104_780,
    3_195_496_050,
    17_146_927_462,
    73_657_853_512,
    266_816_523_888,
    844_626_323_110,
];

/// The 27 moduli classes of height 1.
pub const HEIGHT_ONE: [[i64; 4]; 27] = [
    [0, -1, 0, 1],
    [0, 1, 0, 1],
    [0, -1, 1, 1],
    [0, 0, 0, 1],
    [0, 0, 1, -1],
    [0, 0, 1, 1],
    [1, 0, -1, 1],
    [1, 0, 0, -1],
    [1, 0, 0, 1],
    [1, 0, 1, 1],
    [1, -1, -1, 1],
    [1, 1, -1, 1],
    [1, 1, 1, -1],
    [1, -1, 1, -1],
    [1, 1, 1, 1],
    [1, 0, -1, -1],
    [0, -1, 1, -1],
    [0, 1, 1, -1],
    [0, 1, 1, 1],
    [1, 0, 1, -1],
    [1, -1, -1, -1],
    [1, 1, -1, -1],
    [1, -1, 0, -1],
    [1, 1, 0, -1],
    [1, 1, 0, 1],
    [1, -1, 0, 1],
    [1, -1, 1, 1],
];

/// Reference `L2` points of height `<= 3` (34 tuples, closed under the sign flip).
pub const L2_POINTS: [[i64; 4]; 34] = [
    [4, -14, 2, 1],
    [2, -11, 5, 1],
    [-2, -8, 14, 1],
    [-2, 16, -14, 1],
    [2, 13, -3, 1],
    [4, 16, 0, 2],
    [4, -8, 16, 2],
    [0, -3, 27, 2],
    [-4, 4, 28, 2],
    [-4, -9, 30, 3],
    [2, 4, 54, 3],
    [-2, 13, 57, 3],
    [-3, -15, 42, 6],
    [4, -9, 42, 6],
    [0, -15, 45, 8],
    [-4, -8, 56, 8],
    [3, -15, 48, 10],
    [-3, -15, -48, -10],
    [4, -8, -56, -8],
    [0, -15, -45, -8],
    [3, -15, -42, -6],
    [-4, -9, -42, -6],
    [2, 13, -57, -3],
    [-2, 4, -54, -3],
    [4, -9, -30, -3],
    [-4, 16, 0, -2],
    [4, 4, -28, -2],
    [0, -3, -27, -2],
    [-4, -8, -16, -2],
    [-2, 13, 3, -1],
    [2, 16, 14, -1],
    [2, -8, -14, -1],
    [-2, -11, -5, -1],
    [-4, -14, -2, -1],
];

/// Reference `L3` points of height `<= 3`, in listed order
/// (rows 40 to 44 repeat earlier rows).
pub const L3_POINTS: [[i64; 4]; 44] = [
    [6, 18, 27, 2],
    [-6, -18, 45, 2],
    [3, 18, 0, 4],
    [-3, -18, 36, 4],
    [5, -26, 56, 4],
    [-3, 27, 315, 4],
    [-5, 58, -76, 4],
    [-5, 31, -49, 4],
    [5, 29, -9, 4],
    [-2, -18, 39, 6],
    [-2, -18, 165, 6],
    [2, 18, -15, 6],
    [-8, -80, 429, 8],
    [-8, 49, -101, 8],
    [8, -47, -59, 8],
    [-1, -18, 60, 12],
    [8, 36, 69, 12],
    [-1, -45, 105, 12],
    [-8, -36, 123, 12],
    [-5, 67, -55, 12],
    [1, 18, -48, 12],
    [1, 63, -15, 12],
    [5, -65, -15, 12],
    [6, 36, 36, 16],
    [-6, -36, 108, 16],
    [8, -63, 3, 24],
    [-4, -36, 102, 24],
    [-8, 81, -171, 24],
    [4, 36, -6, 24],
    [5, -59, 16, 32],
    [5, -68, 100, 32],
    [-3, -36, 108, 32],
    [-3, -27, 504, 32],
    [-5, 61, -132, 32],
    [3, 36, -36, 32],
    [9, 54, 108, 36],
    [-9, -54, 216, 36],
    [-2, -36, 132, 48],
    [-2, -72, 336, 48],
    [3, 18, 0, 4],
    [-3, -18, 36, 4],
    [-2, -18, 39, 6],
    [2, 18, -15, 6],
    [-1, -18, 60, 12],
];

/// Stated counts of `L3` points of height `<= 3`, which disagree
/// with each other and with the list.
pub const L3_STATED_COUNTS: [usize; 2] = [44, 46];

/// Neural-network confusion matrix (rows true class, columns predicted),
/// classes `L3`, `L2`, other.
pub const NN_CONFUSION: [[u64; 3]; 3] = [[6255, 0, 0], [938, 8654, 1], [2, 0, 10000]];

/// Reported precision, recall, F1 and support per class for the network.
pub const NN_REPORT: [(f64, f64, f64, u64); 3] = [(0.87, 1.00, 0.93, 6255), (1.00, 0.90, 0.95, 9593), (1.00, 1.00, 1.00, 10074)];

pub const RF_CONFUSION: [[u64; 3]; 3] = [[9315, 0, 0], [2, 14513, 2], [0, 0, 15051]];

pub const KNN_CONFUSION: [[u64; 3]; 3] = [[9312, 3, 0], [4, 14511, 2], [0, 0, 15051]];

/// Reference ARI values for k-means (a range) and the spherical GMM.
pub const KMEANS_ARI: (f64, f64) = (0.65, 0.68);
pub const GMM_ARI: f64 = 0.86;
