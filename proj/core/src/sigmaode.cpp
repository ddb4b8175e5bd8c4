#include "rmt/sigmaode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rmt/errors.hpp"
#include "rmt/quadrature.hpp"
#include "rmt/specfun.hpp"

namespace rmt {
namespace {

constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double e31 = 0.244094488188976377952755905512e+00;
constexpr double e32 = 0.733846688281611857341361741547e+00;
constexpr double e33 = 0.220588235294117647058823529412e-01;

constexpr double e51 = 0.1312004499419488073250102996e-01;
constexpr double e56 = -0.1225156446376204440720569753e+01;
constexpr double e57 = -0.4957589496572501915214079952e+00;
constexpr double e58 = 0.1664377182454986536961530415e+01;
constexpr double e59 = -0.3503288487499736816886487290e+00;
constexpr double e510 = 0.3341791187130174790297318841e+00;
constexpr double e511 = 0.8192320648511571246570742613e-01;
constexpr double e512 = -0.2235530786388629525884427845e-01;

constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

struct Stepper {
  const IvpProblem& pb;
  std::size_t n;
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, tmp, ynew;

  explicit Stepper(const IvpProblem& p) : pb(p), n(p.state0.size()) {
    for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &k8, &k9, &k10, &k11, &k12, &tmp, &ynew}) v->assign(n, 0.0);
  }

  void f(double s, const std::vector<double>& y, std::vector<double>& dy) { pb.rhs(s, y.data(), dy.data()); }

  double scale(double y0, double y1) const { return pb.atol + pb.rtol * std::max(std::fabs(y0), std::fabs(y1)); }

  // One trial step from (x, y) with k1 = f(x, y); returns the scaled error norm or NaN.
  double trial(double x, const std::vector<double>& y, double h) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    f(x + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(x + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
    f(x + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
    f(x + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
    f(x + c6 * h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f(x + c7 * h, tmp, k7);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]);
    f(x + c8 * h, tmp, k8);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i]);
    f(x + c9 * h, tmp, k9);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
                           a108 * k8[i] + a109 * k9[i]);
    f(x + c10 * h, tmp, k10);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
                           a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
    f(x + c11 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
                           a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k2[i]);
    f(x + h, tmp, k3);
    // k2 now holds stage 11 and k3 stage 12.
    double err5 = 0.0, err3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      k4[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] + b11 * k2[i] +
              b12 * k3[i];
      ynew[i] = y[i] + h * k4[i];
    }
    if (!all_finite(ynew)) return std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = scale(y[i], ynew[i]);
      const double e3 = k4[i] - e31 * k1[i] - e32 * k9[i] - e33 * k3[i];
      const double e5 = e51 * k1[i] + e56 * k6[i] + e57 * k7[i] + e58 * k8[i] + e59 * k9[i] + e510 * k10[i] +
                        e511 * k2[i] + e512 * k3[i];
      err3 += (e3 / sk) * (e3 / sk);
      err5 += (e5 / sk) * (e5 / sk);
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    const double err = std::fabs(h) * err5 * std::sqrt(1.0 / (static_cast<double>(n) * deno));
    return std::isfinite(err) ? err : std::numeric_limits<double>::quiet_NaN();
  }

  // Dense-output coefficients after an accepted step; kn = f(x+h, ynew).
  void dense(double x, const std::vector<double>& y, double h, const std::vector<double>& kn, double* r) {
    const std::size_t m = n;
    for (std::size_t i = 0; i < m; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      r[i] = y[i];
      r[m + i] = ydiff;
      r[2 * m + i] = bspl;
      r[3 * m + i] = ydiff - h * kn[i] - bspl;
      r[4 * m + i] = d41 * k1[i] + d46 * k6[i] + d47 * k7[i] + d48 * k8[i] + d49 * k9[i] + d410 * k10[i] +
                     d411 * k2[i] + d412 * k3[i];
      r[5 * m + i] = d51 * k1[i] + d56 * k6[i] + d57 * k7[i] + d58 * k8[i] + d59 * k9[i] + d510 * k10[i] +
                     d511 * k2[i] + d512 * k3[i];
      r[6 * m + i] = d61 * k1[i] + d66 * k6[i] + d67 * k7[i] + d68 * k8[i] + d69 * k9[i] + d610 * k10[i] +
                     d611 * k2[i] + d612 * k3[i];
      r[7 * m + i] = d71 * k1[i] + d76 * k6[i] + d77 * k7[i] + d78 * k8[i] + d79 * k9[i] + d710 * k10[i] +
                     d711 * k2[i] + d712 * k3[i];
    }
    // Three extra stages; k5, k11, k12 are free here.
    for (std::size_t i = 0; i < m; ++i)
      tmp[i] = y[i] + h * (a141 * k1[i] + a147 * k7[i] + a148 * k8[i] + a149 * k9[i] + a1410 * k10[i] +
                           a1411 * k2[i] + a1412 * k3[i] + a1413 * kn[i]);
    f(x + c14 * h, tmp, k5);
    for (std::size_t i = 0; i < m; ++i)
      tmp[i] = y[i] + h * (a151 * k1[i] + a156 * k6[i] + a157 * k7[i] + a158 * k8[i] + a1511 * k2[i] +
                           a1512 * k3[i] + a1513 * kn[i] + a1514 * k5[i]);
    f(x + c15 * h, tmp, k11);
    for (std::size_t i = 0; i < m; ++i)
      tmp[i] = y[i] + h * (a161 * k1[i] + a166 * k6[i] + a167 * k7[i] + a168 * k8[i] + a169 * k9[i] +
                           a1613 * kn[i] + a1614 * k5[i] + a1615 * k11[i]);
    f(x + c16 * h, tmp, k12);
    for (std::size_t i = 0; i < m; ++i) {
      r[4 * m + i] = h * (r[4 * m + i] + d413 * kn[i] + d414 * k5[i] + d415 * k11[i] + d416 * k12[i]);
      r[5 * m + i] = h * (r[5 * m + i] + d513 * kn[i] + d514 * k5[i] + d515 * k11[i] + d516 * k12[i]);
      r[6 * m + i] = h * (r[6 * m + i] + d613 * kn[i] + d614 * k5[i] + d615 * k11[i] + d616 * k12[i]);
      r[7 * m + i] = h * (r[7 * m + i] + d713 * kn[i] + d714 * k5[i] + d715 * k11[i] + d716 * k12[i]);
    }
  }
};

double initial_step(Stepper& st, double x, const std::vector<double>& y, double dir, double span) {
  const std::size_t n = st.n;
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = st.pb.atol + st.pb.rtol * std::fabs(y[i]);
    dnf += (st.k1[i] / sk) * (st.k1[i] / sk);
    dny += (y[i] / sk) * (y[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, span);
  for (std::size_t i = 0; i < n; ++i) st.tmp[i] = y[i] + dir * h * st.k1[i];
  st.f(x + dir * h, st.tmp, st.k2);
  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = st.pb.atol + st.pb.rtol * std::fabs(y[i]);
    const double d = (st.k2[i] - st.k1[i]) / sk;
    der2 += d * d;
  }
  der2 = std::isfinite(der2) ? std::sqrt(der2) / h : 1e300;
  const double der12 = std::max(der2, std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::fabs(h) * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
  return std::max(std::min({100.0 * h, h1, span}), 1e-8 * span);
}

}  // namespace

void IvpProblem::validate() const {
  if (!rhs) throw ParameterError("IvpProblem: missing right-hand side");
  if (!(rtol >= 1e-13 && rtol <= 1e-3)) throw ParameterError("IvpProblem: rtol must lie in [1e-13, 1e-3]");
  if (!(atol >= 1e-14 && atol <= 1e-6)) throw ParameterError("IvpProblem: atol must lie in [1e-14, 1e-6]");
  if (!(s_start != s_end) || !std::isfinite(s_start) || !std::isfinite(s_end))
    throw ParameterError("IvpProblem: need finite s_start != s_end");
  if (state0.empty()) throw ParameterError("IvpProblem: empty state");
}

bool IvpSolution::covers(double s) const {
  const double lo = std::min(s_start_, s_reached_), hi = std::max(s_start_, s_reached_);
  return s >= lo && s <= hi;
}

void IvpSolution::sample(double s, double* out) const {
  if (!covers(s)) {
    std::ostringstream os;
    os << "IvpSolution::sample: " << s << " outside covered span [" << std::min(s_start_, s_reached_) << ", "
       << std::max(s_start_, s_reached_) << "]";
    throw DomainError(os.str());
  }
  if (step_start_.empty()) {
    for (std::size_t i = 0; i < dim_; ++i) out[i] = states_[i];
    return;
  }
  const bool forward = s_reached_ > s_start_;
  std::size_t lo = 0, hi = step_start_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    const bool after = forward ? (s >= step_start_[mid]) : (s <= step_start_[mid]);
    if (after) lo = mid;
    else hi = mid - 1;
  }
  const double h = step_size_[lo];
  const double th = (s - step_start_[lo]) / h;
  const double th1 = 1.0 - th;
  const double* r = &coeffs_[lo * 8 * dim_];
  const std::size_t m = dim_;
  for (std::size_t i = 0; i < m; ++i) {
    const double par = r[4 * m + i] + th * (r[5 * m + i] + th1 * (r[6 * m + i] + th * r[7 * m + i]));
    out[i] = r[i] + th * (r[m + i] + th1 * (r[2 * m + i] + th * (r[3 * m + i] + th1 * par)));
  }
}

std::vector<double> IvpSolution::sample(double s) const {
  std::vector<double> out(dim_);
  sample(s, out.data());
  return out;
}

IvpSolution integrate(const IvpProblem& problem) {
  problem.validate();
  Stepper st(problem);
  const std::size_t n = st.n;
  IvpSolution sol;
  sol.dim_ = n;
  sol.s_start_ = problem.s_start;
  sol.s_reached_ = problem.s_start;
  std::vector<double> y = problem.state0;
  double x = problem.s_start;
  const double dir = problem.s_end > problem.s_start ? 1.0 : -1.0;
  sol.points_.push_back(x);
  sol.states_.insert(sol.states_.end(), y.begin(), y.end());

  if (!all_finite(y)) throw InputError("integrate: non-finite initial state");
  st.f(x, y, st.k1);
  if (!all_finite(st.k1)) throw InputError("integrate: non-finite right-hand side at the initial point");

  const double span = std::fabs(problem.s_end - problem.s_start);
  double h = initial_step(st, x, y, dir, span);
  constexpr double beta = 0.04;
  constexpr double expo1 = 1.0 / 8.0 - beta * 0.2;
  constexpr double safe = 0.9, facc1 = 1.0 / 0.333, facc2 = 1.0 / 6.0;
  double facold = 1e-4;
  bool last_rejected = false;
  std::vector<double> kn(n), r(8 * n);

  for (std::size_t step = 0;; ++step) {
    if (step >= problem.max_steps) {
      sol.terminated_early_ = true;
      break;
    }
    const double remaining = std::fabs(problem.s_end - x);
    if (remaining <= 0.0) break;
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    if (h < 16.0 * kEps * std::max(std::fabs(x), 1.0)) {
      sol.terminated_early_ = true;
      break;
    }
    const double hs = dir * h;
    const double err = st.trial(x, y, hs);
    bool ok = std::isfinite(err);
    if (ok) {
      st.f(x + hs, st.ynew, kn);
      ok = all_finite(kn);
    }
    if (!ok) {
      ++sol.rejected_;
      h *= 0.25;
      last_rejected = true;
      continue;
    }
    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(facc2, std::min(facc1, fac / safe));
    double hnew = h / fac;
    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      st.dense(x, y, hs, kn, r.data());
      sol.step_start_.push_back(x);
      sol.step_size_.push_back(hs);
      sol.coeffs_.insert(sol.coeffs_.end(), r.begin(), r.end());
      x = last ? problem.s_end : x + hs;
      y = st.ynew;
      st.k1 = kn;
      sol.points_.push_back(x);
      sol.states_.insert(sol.states_.end(), y.begin(), y.end());
      sol.s_reached_ = x;
      if (last) break;
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
      h = hnew;
    } else {
      ++sol.rejected_;
      h = h / std::min(facc1, fac11 / safe);
      last_rejected = true;
    }
  }
  return sol;
}

void IvpSolution::scale_states(double factor) {
  for (double& c : coeffs_) c *= factor;
  for (double& v : states_) v *= factor;
}

IvpSolution hastings_mcleod(double t0, double x_min, double rtol) {
  if (!(t0 >= 6.0 && t0 <= 12.0)) throw ParameterError("hastings_mcleod: T0 must lie in [6, 12]");
  if (!(x_min >= -10.0 && x_min <= 0.0)) throw ParameterError("hastings_mcleod: x_min must lie in [-10, 0]");
  const AiryPair a = airy(t0);
  // r = q / Ai(T0) starts at 1, so the absolute tolerance does not swamp the tiny initial data.
  const double c2 = a.ai * a.ai;
  IvpProblem pb;
  pb.rhs = [c2](double x, const double* y, double* dy) {
    dy[0] = y[1];
    dy[1] = x * y[0] + 2.0 * c2 * y[0] * y[0] * y[0];
  };
  pb.s_start = t0;
  pb.s_end = x_min;
  pb.state0 = {1.0, a.aip / a.ai};
  pb.rtol = rtol;
  pb.atol = 1e-14;
  IvpSolution sol = integrate(pb);
  if (sol.terminated_early() && rtol > 1e-13) {
    pb.rtol = std::max(1e-13, rtol * 0.01);
    sol = integrate(pb);
  }
  if (sol.terminated_early()) {
    std::ostringstream os;
    os << "Hastings-McLeod integration stopped at x = " << sol.s_reached();
    throw NumericalError(os.str(), -1, sol.s_reached());
  }
  sol.scale_states(a.ai);
  return sol;
}

GapCurve tw_cdf_from_q(const IvpSolution& solution, const std::vector<double>& x_grid, double t0) {
  if (x_grid.empty()) throw InputError("tw_cdf_from_q: empty grid");
  const double x_lo = *std::min_element(x_grid.begin(), x_grid.end());
  for (double x : x_grid)
    if (!(x <= t0) || !solution.covers(x)) throw DomainError("tw_cdf_from_q: grid outside the solved span");
  const int steps = std::max(1, static_cast<int>(std::ceil((t0 - x_lo) / 0.01)));
  const double h = (t0 - x_lo) / steps;
  // Cumulative right-to-left trapezoid: i0[k] = int_{u_k}^{T0} q^2, i1[k] = int t q^2.
  std::vector<double> u(steps + 1), q2(steps + 1), i0(steps + 1, 0.0), i1(steps + 1, 0.0);
  std::vector<double> st(2);
  for (int k = 0; k <= steps; ++k) {
    u[k] = k == 0 ? t0 : (k == steps ? x_lo : t0 - k * h);
    solution.sample(u[k], st.data());
    q2[k] = st[0] * st[0];
  }
  for (int k = 1; k <= steps; ++k) {
    const double du = u[k - 1] - u[k];
    i0[k] = i0[k - 1] + 0.5 * du * (q2[k] + q2[k - 1]);
    i1[k] = i1[k - 1] + 0.5 * du * (u[k] * q2[k] + u[k - 1] * q2[k - 1]);
  }
  const QuadratureRule tail = map_semi_infinite(map_affine(gauss_legendre(60), 0.0, 1.0), t0);
  double j0 = 0.0, j1 = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double ai = airy(tail.nodes[i]).ai;
    j0 += tail.weights[i] * ai * ai;
    j1 += tail.weights[i] * tail.nodes[i] * ai * ai;
  }
  GapCurve c;
  c.method = "painleve-ii";
  c.s_grid = x_grid;
  c.F.resize(x_grid.size());
  c.logF.resize(x_grid.size());
  c.nonpositive.assign(x_grid.size(), false);
  for (std::size_t g = 0; g < x_grid.size(); ++g) {
    const double x = x_grid[g];
    int k = static_cast<int>(std::floor((t0 - x) / h));
    k = std::clamp(k, 0, steps);
    // Partial panel from x up to u[k].
    double a0 = i0[k], a1 = i1[k];
    const double du = u[k] - x;
    if (du > 0.0) {
      solution.sample(x, st.data());
      const double qx = st[0] * st[0];
      a0 += 0.5 * du * (qx + q2[k]);
      a1 += 0.5 * du * (x * qx + u[k] * q2[k]);
    }
    const double lf = -((a1 - x * a0) + (j1 - x * j0));
    c.logF[g] = std::min(lf, 0.0);
    c.F[g] = std::exp(c.logF[g]);
  }
  return c;
}

}  // namespace rmt
