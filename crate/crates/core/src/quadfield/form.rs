use serde::Serialize;

/// Positive-definite binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BinaryForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

/// `[[p, q], [r, s]]`: new basis vectors are the columns in the old basis.
pub type Transform = [[i128; 2]; 2];

const IDENTITY: Transform = [[1, 0], [0, 1]];

fn compose(m: Transform, n: Transform) -> Transform {
    [
        [
            m[0][0] * n[0][0] + m[0][1] * n[1][0],
            m[0][0] * n[0][1] + m[0][1] * n[1][1],
        ],
        [
            m[1][0] * n[0][0] + m[1][1] * n[1][0],
            m[1][0] * n[0][1] + m[1][1] * n[1][1],
        ],
    ]
}

impl BinaryForm {
    pub fn new(a: i128, b: i128, c: i128) -> Self {
        BinaryForm { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i128 {
        num_integer::gcd(num_integer::gcd(self.a, self.b), self.c)
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant() < 0
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a
            && self.a <= self.c
            && !(self.b < 0 && (self.b == -self.a || self.a == self.c))
    }

    fn translate(&self, t: i128) -> BinaryForm {
        BinaryForm {
            a: self.a,
            b: self.b + 2 * t * self.a,
            c: self.eval(t, 1),
        }
    }

    fn rotate(&self) -> BinaryForm {
        BinaryForm {
            a: self.c,
            b: -self.b,
            c: self.a,
        }
    }

    /// The unique reduced form properly equivalent to `self`, and an `SL_2(Z)`
    /// transform taking the old basis to the reduced one.
    pub fn reduce(&self) -> (BinaryForm, Transform) {
        debug_assert!(self.is_positive_definite());
        let mut f = *self;
        let mut m = IDENTITY;
        loop {
            // b into (-a, a]
            let t = (f.a - f.b).div_euclid(2 * f.a);
            if t != 0 {
                f = f.translate(t);
                m = compose(m, [[1, t], [0, 1]]);
            }
            if f.a > f.c {
                f = f.rotate();
                m = compose(m, [[0, -1], [1, 0]]);
            } else {
                break;
            }
        }
        if f.a == f.c && f.b < 0 {
            f = f.rotate();
            m = compose(m, [[0, -1], [1, 0]]);
        }
        debug_assert!(f.is_reduced());
        (f, m)
    }

    /// All reduced primitive forms of discriminant `d < 0`.
    pub fn reduced_forms(d: i128) -> Vec<BinaryForm> {
        let mut out = vec![];
        let mut a = 1i128;
        while 3 * a * a <= -d {
            for b in -a + 1..=a {
                if (b - d).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                let f = BinaryForm { a, b, c };
                if c >= a && f.is_reduced() && f.content() == 1 {
                    out.push(f);
                }
            }
            a += 1;
        }
        out.sort();
        out
    }
}
