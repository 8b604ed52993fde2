#include "plateau/funnel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plateau/error.hpp"
#include "plateau/pullback.hpp"

namespace plateau {

namespace {

Eigen::Matrix2d rotation(double a) {
  Eigen::Matrix2d R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return R;
}

Vec2 direction(double a) { return Vec2(std::cos(a), std::sin(a)); }

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

long floordiv(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// Minimizer of a unimodal f on [lo, hi]; endpoints included.
template <class F>
std::pair<double, double> golden(F f, double lo, double hi, int iterations = 40) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  std::pair<double, double> best = fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
  for (double x : {lo, hi}) {
    const double v = f(x);
    if (v < best.second) best = {x, v};
  }
  return best;
}

class FunnelField final : public DistanceField {
 public:
  FunnelField(const FunnelExtension& ext, const Point& center)
      : DistanceField(ext, center), ext_(ext), in_base_(!ext.in_funnel(center)) {
    if (in_base_) {
      base_field_ = ext.base().distance_field(center);
      hp_ = ext.portal_distances(center);
    }
  }
  double operator()(const Point& q) const override {
    if (!in_base_) return ext_.distance(center_, q);
    if (!ext_.in_funnel(q)) return (*base_field_)(q);
    return ext_.mixed_distance(center_, hp_, q);
  }

 private:
  const FunnelExtension& ext_;
  bool in_base_;
  std::unique_ptr<DistanceField> base_field_;
  std::vector<double> hp_;
};

}  // namespace

FunnelExtension::FunnelExtension(SpacePtr base, PolygonalCurve curve, double truncation, int portals_per_edge)
    : base_(std::move(base)), curve_(std::move(curve)), R_(truncation), portals_(portals_per_edge) {
  if (!base_) throw Error(ErrorCode::InvalidArgument, "funnel needs a base space");
  if (!curve_.closed || curve_.size() < 3) throw Error(ErrorCode::InvalidCurve, "funnel needs a closed polygon");
  if (!(R_ > 0)) throw Error(ErrorCode::InvalidArgument, "truncation radius must be positive");
  if (portals_ < 1) throw Error(ErrorCode::InvalidArgument, "portals_per_edge must be >= 1");
  n_ = curve_.size();
  base_charts_ = base_->chart_count();
  set_length_scale(base_->length_scale());
  const CurvatureReport cr = total_curvature(*base_, curve_);
  alpha_ = cr.turning_angles;
  for (double a : alpha_)
    if (a < -1e-9 || a > M_PI + 1e-9) throw Error(ErrorCode::DegenerateAngle, "sector angle outside [0, pi]");
  kappa_ = 0.0;
  for (double a : alpha_) kappa_ += a;
  sector_k_.resize(n_);
  for (int i = 0; i < n_; ++i) sector_k_[i] = std::max(1, static_cast<int>(std::ceil(alpha_[i] / (M_PI / 32))));
  theta_.assign(n_, 0.0);
  origin_.assign(n_ + 1, Vec2::Zero());
  for (int j = 1; j < n_; ++j) theta_[j] = theta_[j - 1] + alpha_[j];
  for (int j = 0; j < n_; ++j) origin_[j + 1] = origin_[j] + curve_.edge_lengths[j] * direction(theta_[j]);
  hol_.rot = rotation(kappa_);
  hol_.shift = origin_[n_];
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      diameter_ = std::max(diameter_, base_->distance(curve_.vertices[i], curve_.vertices[j]));
  vertex_base_ = curve_.vertices;
}

std::string FunnelExtension::describe() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << "funnel(" << base_->describe() << ", edges=" << n_ << ", kappa=" << kappa_ << ", R=" << R_ << ")";
  return os.str();
}

Point FunnelExtension::strip_point(int i, double s, double t) const { return Point::planar(strip_chart(i), s, t); }

Point FunnelExtension::sector_point(int i, double rho, double phi) const {
  return Point::planar(sector_chart(i), rho * std::cos(phi), rho * std::sin(phi));
}

Point FunnelExtension::curve_point(int edge, double s) const {
  const double l = curve_.edge_lengths[edge];
  const double f = l > 0 ? std::clamp(s / l, 0.0, 1.0) : 0.0;
  if (f <= 0) return vertex_base_[edge];
  if (f >= 1) return vertex_base_[(edge + 1) % n_];
  return base_->geodesic_point(vertex_base_[edge], vertex_base_[(edge + 1) % n_], f);
}

double FunnelExtension::funnel_depth(const Point& p) const {
  if (!in_funnel(p)) return 0.0;
  const int c = p.chart - base_charts_;
  return c < n_ ? p.coords(1) : p.xy().norm();
}

double FunnelExtension::funnel_area() const {
  double a = 0.0;
  for (int i = 0; i < n_; ++i) {
    a += curve_.edge_lengths[i] * R_;
    a += 0.5 * sector_k_[i] * R_ * R_ * std::sin(alpha_[i] / sector_k_[i]);
  }
  return a;
}

void FunnelExtension::validate(const Point& p) const {
  if (p.chart < 0 || p.chart >= chart_count()) throw Error(ErrorCode::InvalidChart, "missing chart in " + p.str());
  if (!in_funnel(p)) return base_->validate(p);
  if (p.dim() != 2 || !p.coords.allFinite()) throw Error(ErrorCode::InvalidChart, "bad coordinates " + p.str());
  const double tol = 1e-9 * std::max(1.0, length_scale());
  const int c = p.chart - base_charts_;
  if (c < n_) {
    const double s = p.coords(0), t = p.coords(1);
    if (s < -tol || s > curve_.edge_lengths[c] + tol || t < -tol || t > R_ + tol)
      throw Error(ErrorCode::InvalidChart, "point outside its strip " + p.str());
    return;
  }
  const int i = c - n_;
  const Vec2 x = p.xy();
  const double rho = x.norm();
  if (rho > R_ + tol) throw Error(ErrorCode::InvalidChart, "point beyond the truncation " + p.str());
  if (rho <= tol) return;
  const double phi = std::atan2(x.y(), x.x());
  const double slack = tol / rho;
  if (phi < -slack || phi > alpha_[i] + slack) throw Error(ErrorCode::InvalidChart, "point outside its sector " + p.str());
}

int FunnelExtension::unrolled_chart(long u) const {
  const long k = u - 2L * n_ * floordiv(u, 2L * n_);
  return k % 2 == 0 ? sector_chart(static_cast<int>(k / 2)) : strip_chart(static_cast<int>(k / 2));
}

FunnelExtension::Affine FunnelExtension::holonomy_power(long laps) const {
  Affine h;
  if (laps == 0) return h;
  Affine step = hol_;
  if (laps < 0) {
    step.rot = hol_.rot.transpose();
    step.shift = -(hol_.rot.transpose() * hol_.shift);
  }
  for (long i = 0; i < std::abs(laps); ++i) {
    h.shift = step.rot * h.shift + step.shift;
    h.rot = step.rot * h.rot;
  }
  return h;
}

FunnelExtension::Affine FunnelExtension::chart_frame(long u) const {
  const long lap = floordiv(u, 2L * n_);
  const long k = u - 2L * n_ * lap;
  const int j = static_cast<int>(k / 2);
  Affine f;
  if (k % 2 == 1) {
    Eigen::Matrix2d flip = Eigen::Matrix2d::Identity();
    flip(1, 1) = -1;
    f.rot = rotation(theta_[j]) * flip;
    f.shift = origin_[j];
  } else {
    f.rot = rotation(theta_[j] - alpha_[j] - M_PI / 2);
    f.shift = origin_[j];
  }
  const Affine h = holonomy_power(lap);
  f.shift = h.rot * f.shift + h.shift;
  f.rot = h.rot * f.rot;
  return f;
}

Vec2 FunnelExtension::vertex_dev(long w) const {
  const long lap = floordiv(w, n_);
  const Affine h = holonomy_power(lap);
  return h.apply(origin_[w - lap * n_]);
}

FunnelExtension::Lifted FunnelExtension::lift(const Point& p, long laps) const {
  const int c = p.chart - base_charts_;
  Lifted l;
  double lo, hi;
  if (c < n_) {
    l.unrolled = 2L * c + 1;
    lo = hi = theta_[c];
  } else {
    const int i = c - n_;
    l.unrolled = 2L * i;
    lo = theta_[i] - alpha_[i];
    hi = theta_[i];
  }
  l.unrolled += 2L * n_ * laps;
  l.turn_lo = lo + laps * kappa_;
  l.turn_hi = hi + laps * kappa_;
  l.dev = chart_frame(l.unrolled).apply(p.xy());
  return l;
}

FunnelExtension::Lifted FunnelExtension::gamma_lift(int edge, double s) const {
  Lifted l;
  l.unrolled = 2L * edge + 1;
  l.turn_lo = l.turn_hi = theta_[edge];
  l.dev = origin_[edge] + s * direction(theta_[edge]);
  return l;
}

bool FunnelExtension::on_curve(const Lifted& a, double eps) const {
  const Affine f = chart_frame(a.unrolled);
  const Vec2 x = f.rot.transpose() * (a.dev - f.shift);
  return (a.unrolled % 2 != 0) ? x.y() <= eps : x.norm() <= eps;
}

bool FunnelExtension::outward(const Lifted& a, const Vec2& dir, double eps) const {
  const double m = eps * dir.norm();
  if (dir.dot(direction(a.turn_lo - M_PI / 2)) >= -m) return true;
  return dir.dot(direction(a.turn_hi - M_PI / 2)) >= -m;
}

bool FunnelExtension::visible(const Lifted& a, const Lifted& b) const {
  if (a.unrolled == b.unrolled) return true;
  const double gap = std::max(a.turn_lo - b.turn_hi, b.turn_lo - a.turn_hi);
  if (gap >= M_PI - 1e-12) return false;
  const Vec2 d = b.dev - a.dev;
  const double scale = std::max(1.0, length_scale());
  const double eps = 1e-11 * scale;
  if (d.norm() <= eps) return true;
  if (on_curve(a, eps) && !outward(a, d, 1e-11)) return false;
  if (on_curve(b, eps) && !outward(b, -d, 1e-11)) return false;
  const double tol = 1e-11 * scale * d.norm();
  if (b.unrolled > a.unrolled) {
    for (long u = a.unrolled; u < b.unrolled; ++u)
      if (cross2(d, vertex_dev(floordiv(u + 1, 2)) - a.dev) < -tol) return false;
  } else {
    for (long u = b.unrolled; u < a.unrolled; ++u)
      if (cross2(d, vertex_dev(floordiv(u + 1, 2)) - a.dev) > tol) return false;
  }
  return true;
}

double FunnelExtension::straight(const Point& a, const Point& b, long* from, long* to, Vec2* adev, Vec2* bdev) const {
  const Lifted la = lift(a, 0);
  double best = INFINITY;
  for (long L = -2; L <= 2; ++L) {
    const Lifted lb = lift(b, L);
    if (a.chart == b.chart && L != 0) continue;
    if (!visible(la, lb)) continue;
    const double d = (lb.dev - la.dev).norm();
    if (d < best) {
      best = d;
      if (from) *from = la.unrolled;
      if (to) *to = lb.unrolled;
      if (adev) *adev = la.dev;
      if (bdev) *bdev = lb.dev;
    }
  }
  return best;
}

double FunnelExtension::base_to_curve(const Point& center, int edge, double s) const {
  return base_->distance(center, curve_point(edge, s));
}

std::vector<double> FunnelExtension::portal_distances(const Point& center) const {
  std::vector<double> hp(static_cast<std::size_t>(n_) * (portals_ + 1));
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k <= portals_; ++k)
      hp[j * (portals_ + 1) + k] = base_to_curve(center, j, curve_.edge_lengths[j] * k / portals_);
  return hp;
}

double FunnelExtension::mixed(const Point& center, const std::vector<double>& hp, const Point& q,
                              Crossing* best) const {
  struct Cand {
    double value;
    int edge, k;
    long lap;
  };
  std::vector<Cand> cands;
  std::vector<Lifted> lifts;
  for (long L = -2; L <= 2; ++L) lifts.push_back(lift(q, L));
  const double eps = 1e-11;
  for (int j = 0; j < n_; ++j) {
    const Vec2 u = direction(theta_[j]);
    const Vec2 nrm = direction(theta_[j] - M_PI / 2);
    const double l = curve_.edge_lengths[j];
    for (long L = -2; L <= 2; ++L) {
      const Lifted& lq = lifts[L + 2];
      const double gap = std::max(theta_[j] - lq.turn_hi, lq.turn_lo - theta_[j]);
      if (gap >= M_PI - 1e-12) continue;
      for (int k = 0; k <= portals_; ++k) {
        const Vec2 G = origin_[j] + (l * k / portals_) * u;
        const Vec2 d = lq.dev - G;
        if (d.dot(nrm) < -eps * d.norm()) continue;
        cands.push_back({hp[j * (portals_ + 1) + k] + d.norm(), j, k, L});
      }
    }
  }
  auto before = [](const Cand& a, const Cand& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.edge != b.edge) return a.edge < b.edge;
    if (a.lap != b.lap) return a.lap < b.lap;
    return a.k < b.k;
  };
  // Refine around the two best visible candidates on distinct (edge, lap).
  double out = INFINITY;
  std::vector<std::pair<int, long>> done;
  std::vector<char> used(cands.size(), 0);
  while (done.size() < 2) {
    int bi = -1;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (used[i]) continue;
      if (std::find(done.begin(), done.end(), std::pair<int, long>{cands[i].edge, cands[i].lap}) != done.end()) continue;
      if (bi < 0 || before(cands[i], cands[bi])) bi = static_cast<int>(i);
    }
    if (bi < 0) break;
    used[bi] = 1;
    const Cand& c = cands[bi];
    const Lifted& lq = lifts[c.lap + 2];
    const double l = curve_.edge_lengths[c.edge];
    if (!visible(gamma_lift(c.edge, l * c.k / portals_), lq)) continue;
    done.push_back({c.edge, c.lap});
    const Vec2 u = direction(theta_[c.edge]);
    auto f = [&](double s) { return base_to_curve(center, c.edge, s) + (lq.dev - origin_[c.edge] - s * u).norm(); };
    const double lo = l * std::max(0, c.k - 1) / portals_, hi = l * std::min(portals_, c.k + 1) / portals_;
    auto [s, v] = golden(f, lo, hi);
    if (c.value < v) s = l * c.k / portals_, v = c.value;
    if (v < out) {
      out = v;
      if (best) *best = {c.edge, s, static_cast<int>(c.lap)};
    }
  }
  return out;
}

double FunnelExtension::mixed_distance(const Point& center, const std::vector<double>& hp, const Point& q) const {
  return mixed(center, hp, q, nullptr);
}

FunnelExtension::Route FunnelExtension::route(const Point& p, const Point& q) const {
  Route r;
  const bool fp = in_funnel(p), fq = in_funnel(q);
  if (!fp && !fq) {
    r.kind = Route::Base;
    r.length = base_->distance(p, q);
    return r;
  }
  if (fp != fq) {
    const Point& c = fp ? q : p;
    const Point& f = fp ? p : q;
    r.kind = Route::Mixed;
    r.reversed = fp;
    r.length = mixed(c, portal_distances(c), f, &r.g1);
    return r;
  }
  r.kind = Route::Straight;
  r.length = straight(p, q, &r.straight_from, &r.straight_to, &r.a_dev, &r.b_dev);
  // Paths touching the curve: p -> g1 (funnel), g1 -> g2 (base), g2 -> q (funnel).
  struct Seen {
    int edge, k;
    long lap;
    double d;
  };
  auto visible_portals = [&](const Point& x) {
    std::vector<Seen> out;
    std::vector<Lifted> lifts;
    for (long L = -2; L <= 2; ++L) lifts.push_back(lift(x, L));
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k <= portals_; ++k) {
        const Lifted g = gamma_lift(j, curve_.edge_lengths[j] * k / portals_);
        double best = INFINITY;
        long bl = 0;
        for (long L = -2; L <= 2; ++L)
          if (visible(g, lifts[L + 2])) {
            const double d = (lifts[L + 2].dev - g.dev).norm();
            if (d < best) best = d, bl = L;
          }
        if (std::isfinite(best)) out.push_back({j, k, bl, best});
      }
    return out;
  };
  const auto vp = visible_portals(p), vq = visible_portals(q);
  if (vp.empty() || vq.empty()) return r;
  // Discrete best per second-crossing (edge, lap), with its visible portal range.
  struct Group {
    int edge;
    long lap;
    int k_lo, k_hi;
    double value;
  };
  std::vector<Group> groups;
  std::vector<Point> gp;
  for (const Seen& a : vp) gp.push_back(curve_point(a.edge, curve_.edge_lengths[a.edge] * a.k / portals_));
  for (const Seen& b : vq) {
    const Point gb = curve_point(b.edge, curve_.edge_lengths[b.edge] * b.k / portals_);
    double v = INFINITY;
    for (std::size_t i = 0; i < vp.size(); ++i)
      if (vp[i].d + b.d < v) v = std::min(v, vp[i].d + b.d + base_->distance(gp[i], gb));
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.edge == b.edge && g.lap == b.lap; });
    if (it == groups.end()) {
      groups.push_back({b.edge, b.lap, b.k, b.k, v});
    } else {
      it->k_lo = std::min(it->k_lo, b.k);
      it->k_hi = std::max(it->k_hi, b.k);
      it->value = std::min(it->value, v);
    }
  }
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) { return a.value < b.value; });
  // The objective is 2-Lipschitz in each crossing, so a group can only win if
  // its discrete value is within one portal spacing per crossing of the best.
  const double h = 2.0 * *std::max_element(curve_.edge_lengths.begin(), curve_.edge_lengths.end()) / portals_;
  for (const Group& grp : groups) {
    if (grp.value - h >= r.length) break;
    // Outer search over the second crossing, whose objective is convex along
    // the edge; the inner one is the exact base-to-funnel distance.
    const Lifted lq = lift(q, grp.lap);
    const int e2 = grp.edge;
    const double l2 = curve_.edge_lengths[e2];
    const double lo = l2 * std::max(0, grp.k_lo - 1) / portals_, hi = l2 * std::min(portals_, grp.k_hi + 1) / portals_;
    auto outer = [&](double s2) {
      const Point g = curve_point(e2, s2);
      return mixed(g, portal_distances(g), p, nullptr) + (lq.dev - origin_[e2] - s2 * direction(theta_[e2])).norm();
    };
    const auto [s2, v] = golden(outer, lo, hi, 48);
    if (v < r.length) {
      const Point g = curve_point(e2, s2);
      Crossing c1;
      mixed(g, portal_distances(g), p, &c1);
      r.kind = Route::Mixed2;
      r.length = v;
      r.g1 = c1;
      r.g2 = {e2, s2, static_cast<int>(grp.lap)};
    }
  }
  return r;
}

double FunnelExtension::distance(const Point& p, const Point& q) const {
  validate(p);
  validate(q);
  if (in_funnel(p) && p.chart == q.chart) return (p.xy() - q.xy()).norm();
  return route(p, q).length;
}

Point FunnelExtension::from_dev(long from, long to, const Vec2& x) const {
  const long lo = std::min(from, to), hi = std::max(from, to);
  const double tol = 1e-9 * std::max(1.0, length_scale());
  Point best;
  double best_err = INFINITY;
  for (long u = lo; u <= hi; ++u) {
    const Affine f = chart_frame(u);
    Vec2 y = f.rot.transpose() * (x - f.shift);
    const int c = unrolled_chart(u) - base_charts_;
    double err;
    if (c < n_) {
      const double l = curve_.edge_lengths[c];
      err = std::max({-y.x(), y.x() - l, -y.y(), 0.0});
      y.x() = std::clamp(y.x(), 0.0, l);
      y.y() = std::max(y.y(), 0.0);
    } else {
      const int i = c - n_;
      const double rho = y.norm();
      const double phi = rho > 0 ? std::atan2(y.y(), y.x()) : 0.0;
      err = rho * std::max({-phi, phi - alpha_[i], 0.0});
      const double cl = std::clamp(phi, 0.0, alpha_[i]);
      y = rho * direction(cl);
    }
    if (err < best_err) {
      best_err = err;
      best = Point::from(unrolled_chart(u), y);
      if (err <= tol) break;
    }
  }
  return best;
}

Point FunnelExtension::geodesic_point(const Point& p, const Point& q, double t) const {
  validate(p);
  validate(q);
  if (t <= 0) return p;
  if (t >= 1) return q;
  if (in_funnel(p) && p.chart == q.chart) return Point::from(p.chart, (1 - t) * p.xy() + t * q.xy());
  const Route r = route(p, q);
  if (!std::isfinite(r.length)) throw Error(ErrorCode::GeodesicNotResolved, "no route between " + p.str() + " and " + q.str());
  switch (r.kind) {
    case Route::Base:
      return base_->geodesic_point(p, q, t);
    case Route::Straight:
      return from_dev(r.straight_from, r.straight_to, (1 - t) * r.a_dev + t * r.b_dev);
    case Route::Mixed: {
      const Point& c = r.reversed ? q : p;
      const Point& f = r.reversed ? p : q;
      const double tc = r.reversed ? 1 - t : t;  // fraction measured from the base end
      const Point g = curve_point(r.g1.edge, r.g1.s);
      const double l1 = base_->distance(c, g);
      const double arc = tc * r.length;
      if (arc <= l1) return l1 > 0 ? base_->geodesic_point(c, g, arc / l1) : c;
      const Lifted lg = gamma_lift(r.g1.edge, r.g1.s), lf = lift(f, r.g1.lap);
      const double l2 = r.length - l1;
      const double w = l2 > 0 ? (arc - l1) / l2 : 1.0;
      return from_dev(lg.unrolled, lf.unrolled, (1 - w) * lg.dev + w * lf.dev);
    }
    case Route::Mixed2: {
      const Lifted lp = lift(p, r.g1.lap), lq = lift(q, r.g2.lap);
      const Lifted g1 = gamma_lift(r.g1.edge, r.g1.s), g2 = gamma_lift(r.g2.edge, r.g2.s);
      const double a = (g1.dev - lp.dev).norm();
      const double c = (lq.dev - g2.dev).norm();
      const double arc = t * r.length;
      if (arc <= a) return from_dev(g1.unrolled, lp.unrolled, lp.dev + (a > 0 ? arc / a : 0.0) * (g1.dev - lp.dev));
      const double b = r.length - a - c;
      if (arc <= a + b) {
        const Point x = curve_point(r.g1.edge, r.g1.s), y = curve_point(r.g2.edge, r.g2.s);
        return b > 0 ? base_->geodesic_point(x, y, (arc - a) / b) : x;
      }
      const double w = c > 0 ? (arc - a - b) / c : 1.0;
      return from_dev(g2.unrolled, lq.unrolled, (1 - w) * g2.dev + w * lq.dev);
    }
  }
  return p;
}

Point FunnelExtension::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  if (U(rng) < 0.5) return base_->random_point(rng);
  double pick = U(rng) * curve_.length();
  int j = 0;
  while (j + 1 < n_ && pick > curve_.edge_lengths[j]) pick -= curve_.edge_lengths[j++];
  return strip_point(j, std::clamp(pick, 0.0, curve_.edge_lengths[j]), 0.25 * R_ * U(rng));
}

std::unique_ptr<DistanceField> FunnelExtension::distance_field(const Point& center) const {
  return std::make_unique<FunnelField>(*this, center);
}

FunnelPtr build_funnel(SpacePtr space, const PolygonalCurve& curve, double R, int portals_per_edge) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "funnel needs a space");
  if (!curve.closed || curve.size() < 3) throw Error(ErrorCode::InvalidCurve, "funnel needs a closed polygon");
  const double sep = min_edge_separation(*space, curve);
  if (!(sep > 1e-9 * std::max(1.0, space->length_scale())))
    throw Error(ErrorCode::InvalidCurve, "curve is not a Jordan polygon");
  // A turning angle of pi folds the curve back onto itself.
  for (double t : total_curvature(*space, curve).turning_angles)
    if (t > M_PI - 1e-9) throw Error(ErrorCode::InvalidCurve, "curve folds back at a vertex");
  double diam = 0.0;
  for (int i = 0; i < curve.size(); ++i)
    for (int j = i + 1; j < curve.size(); ++j) diam = std::max(diam, space->distance(curve.vertices[i], curve.vertices[j]));
  if (R <= 0) R = 8 * diam;
  return std::make_shared<FunnelExtension>(space, curve, R, portals_per_edge);
}

double extended_distance(const FunnelExtension& ext, const Point& p, const Point& q) { return ext.distance(p, q); }

MeshMap ExtendedMap::disc() const {
  MeshMap m;
  m.mesh.vertices.assign(map.mesh.vertices.begin(), map.mesh.vertices.begin() + disc_vertices);
  m.mesh.triangles.assign(map.mesh.triangles.begin(), map.mesh.triangles.begin() + disc_triangles);
  m.mesh.boundary_loop = disc_boundary;
  m.mesh.rings = disc_rings;
  m.images.assign(map.images.begin(), map.images.begin() + disc_vertices);
  const auto* ext = dynamic_cast<const FunnelExtension*>(map.space.get());
  m.space = ext ? ext->base_ptr() : map.space;
  return m;
}

ExtendedMap extend_plateau(const SolveResult& result, FunnelPtr ext, int funnel_rings) {
  if (!ext) throw Error(ErrorCode::InvalidArgument, "missing funnel");
  if (funnel_rings < 1) throw Error(ErrorCode::InvalidArgument, "funnel_rings must be >= 1");
  const MetricSpace& base = ext->base();
  const PolygonalCurve& curve = ext->curve();
  const double tol = 1e3 * base.geodesic_tolerance();
  if (result.curve.size() != curve.size())
    throw Error(ErrorCode::BoundaryMismatch, "solved curve differs from the funnel curve");
  for (int i = 0; i < curve.size(); ++i)
    if (base.distance(result.curve.vertices[i], curve.vertices[i]) > tol)
      throw Error(ErrorCode::BoundaryMismatch, "solved curve differs from the funnel curve at vertex " + std::to_string(i));
  const auto& loop = result.map.mesh.boundary_loop;
  if (result.boundary_params.size() != loop.size())
    throw Error(ErrorCode::BoundaryMismatch, "boundary parameters do not match the boundary loop");
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point g = arc_length_param(base, curve, result.boundary_params[i]);
    if (base.distance(result.map.images[loop[i]], g) > tol)
      throw Error(ErrorCode::BoundaryMismatch, "boundary vertex " + std::to_string(loop[i]) + " is off the curve");
  }

  ExtendedMap out;
  MeshMap& m = out.map;
  m.mesh = result.map.mesh;
  m.images = result.map.images;
  m.space = ext;
  out.disc_vertices = result.map.mesh.vertex_count();
  out.disc_triangles = result.map.mesh.triangle_count();
  out.disc_boundary = loop;
  out.disc_rings = result.map.mesh.rings;
  out.disc_area = map_area(result.map);
  m.mesh.boundary_loop.clear();
  m.mesh.rings = 0;

  const int n = ext->edge_count();
  const double R = ext->truncation();
  const int M = funnel_rings;
  const double h0 = curve.length() / std::max<std::size_t>(loop.size(), 3);
  // Rows: geometric spacing from about h0 next to the curve out to R.
  std::vector<double> rho(M + 1);
  if (h0 * M >= R) {
    for (int k = 0; k <= M; ++k) rho[k] = R * k / M;
  } else {
    double lo = 1e-12, hi = 10.0;
    auto first = [&](double q) { return R * q / (std::pow(1 + q, M) - 1); };
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (first(mid) > h0 ? lo : hi) = mid;
    }
    const double q = 0.5 * (lo + hi);
    for (int k = 0; k <= M; ++k) rho[k] = R * (std::pow(1 + q, k) - 1) / (std::pow(1 + q, M) - 1);
  }
  rho[M] = R;
  // Domain layout: angle from the position along the level curve at R/4.
  const double ref = 0.25 * R;
  const double total = ext->level_length(ref);
  auto domain = [&](double pos, int row) {
    const double a = 2 * M_PI * pos / total;
    const double r = 1.0 + 0.5 * row / M;
    return Vec2(r * std::cos(a), r * std::sin(a));
  };
  auto add_tri = [&](int a, int b, int c) {
    const Vec2 &A = m.mesh.vertices[a], &B = m.mesh.vertices[b], &C = m.mesh.vertices[c];
    if ((B - A).x() * (C - A).y() - (B - A).y() * (C - A).x() < 0) std::swap(b, c);
    m.mesh.triangles.push_back({a, b, c});
  };
  auto add_vertex = [&](const Vec2& d, const Point& img) {
    m.mesh.vertices.push_back(d);
    m.images.push_back(img);
    return m.mesh.vertex_count() - 1;
  };
  std::vector<int> outer;
  double pos = 0.0;
  for (int i = 0; i < n; ++i) {
    // Sector at vertex i.
    const int K = ext->sector_divisions(i);
    const double a = ext->sector_angles()[i];
    const int apex = add_vertex(domain(pos + 0.5 * a * ref, 0), ext->sector_point(i, 0.0, 0.0));
    std::vector<std::vector<int>> grid(M + 1, std::vector<int>(K + 1, apex));
    for (int k = 1; k <= M; ++k)
      for (int c = 0; c <= K; ++c)
        grid[k][c] = add_vertex(domain(pos + a * ref * c / K, k), ext->sector_point(i, rho[k], a * c / K));
    for (int c = 0; c < K; ++c) {
      add_tri(apex, grid[1][c], grid[1][c + 1]);
      for (int k = 1; k < M; ++k) {
        add_tri(grid[k][c], grid[k + 1][c], grid[k + 1][c + 1]);
        add_tri(grid[k][c], grid[k + 1][c + 1], grid[k][c + 1]);
      }
    }
    for (int c = 0; c <= K; ++c) outer.push_back(grid[M][c]);
    pos += a * ref;
    // Strip over edge i.
    const double l = curve.edge_lengths[i];
    const int N = std::max(2, static_cast<int>(std::ceil(l / h0)));
    std::vector<std::vector<int>> sg(M + 1, std::vector<int>(N + 1));
    for (int k = 0; k <= M; ++k)
      for (int c = 0; c <= N; ++c) sg[k][c] = add_vertex(domain(pos + l * c / N, k), ext->strip_point(i, l * c / N, rho[k]));
    for (int c = 0; c < N; ++c)
      for (int k = 0; k < M; ++k) {
        add_tri(sg[k][c], sg[k + 1][c], sg[k + 1][c + 1]);
        add_tri(sg[k][c], sg[k + 1][c + 1], sg[k][c + 1]);
      }
    for (int c = 0; c <= N; ++c) outer.push_back(sg[M][c]);
    pos += l;
  }
  m.mesh.boundary_loop = outer;
  for (int t = out.disc_triangles; t < m.mesh.triangle_count(); ++t) {
    const auto& T = m.mesh.triangles[t];
    const Vec2 a = m.images[T[0]].xy(), b = m.images[T[1]].xy(), c = m.images[T[2]].xy();
    out.funnel_area += std::abs(0.5 * cross2(b - a, c - a));
  }
  return out;
}

GrowthReport area_growth(const ExtendedMap& extended, const FunnelExtension& ext, const Point& p,
                         const std::vector<double>& radii, int samples_per_triangle) {
  GrowthReport g;
  g.cap = 0.8 * ext.truncation();
  if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "empty radius grid");
  for (double r : radii)
    if (r > g.cap * (1 + 1e-12)) throw Error(ErrorCode::RadiusTooLarge, "radius beyond 0.8 R");
  const DensityProfile prof = density_profile(extended.map, p, radii, samples_per_triangle);
  g.radii = prof.radii;
  g.theta = prof.theta;
  g.stderr_ = prof.stderr_;
  g.monotonicity_defect = prof.monotonicity_defect;
  g.theta_infinity_estimate = prof.theta.back();
  g.predicted = ext.kappa() / (2 * M_PI);
  g.error = std::abs(g.theta_infinity_estimate - g.predicted);
  return g;
}

KeyEstimate key_estimate_check(const ExtendedMap& extended, const FunnelExtension& ext, double kappa,
                               const std::vector<Point>& probes, double image_tol, double cluster_tol) {
  KeyEstimate k;
  k.bound = static_cast<int>(std::floor(kappa / (2 * M_PI) + 0.1));
  const MeshMap disc = extended.disc();
  const PullbackMetric pb = pullback_metric(disc);
  k.counts.reserve(probes.size());
  for (const Point& p : probes) {
    int count;
    if (ext.in_funnel(p)) {
      // The funnel part is the identity chart map: one preimage.
      ext.validate(p);
      count = 1;
    } else {
      count = find_preimages(disc, pb, p, image_tol, cluster_tol).count;
    }
    k.counts.push_back(count);
    if (count > k.worst_count) k.worst_count = count, k.worst_probe = static_cast<int>(k.counts.size()) - 1;
  }
  k.pass = k.worst_count <= k.bound;
  return k;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Embedded:
      return "embedded";
    case Verdict::RigidConeCandidate:
      return "rigid_cone_candidate";
    case Verdict::AboveThreshold:
      return "above_threshold";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

FaryMilnorVerdict fary_milnor(SpacePtr space, const PolygonalCurve& curve, const SolverConfig& cfg,
                              const FaryMilnorOptions& opt) {
  FaryMilnorVerdict v;
  v.kappa = total_curvature(*space, curve).kappa;
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  if (v.kappa > 4 * M_PI + opt.tol_kappa) {
    v.verdict = Verdict::AboveThreshold;
    os << "kappa/pi = " << v.kappa / M_PI << " > 4";
    v.reason = os.str();
    return v;
  }
  SolveResult solved;
  try {
    solved = solve_plateau(space, curve, cfg);
  } catch (const Error& e) {
    v.verdict = Verdict::Inconclusive;
    v.reason = std::string("solver failed: ") + e.what();
    return v;
  }
  return fary_milnor_from_solve(space, curve, std::move(solved), opt);
}

FaryMilnorVerdict fary_milnor_from_solve(SpacePtr space, const PolygonalCurve& curve, SolveResult solved,
                                         const FaryMilnorOptions& opt, const GrowthReport* growth,
                                         const InjectivityReport* injectivity) {
  FaryMilnorVerdict v;
  v.kappa = total_curvature(*space, curve).kappa;
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  if (v.kappa > 4 * M_PI + opt.tol_kappa) {
    v.verdict = Verdict::AboveThreshold;
    os << "kappa/pi = " << v.kappa / M_PI << " > 4";
    v.reason = os.str();
    return v;
  }
  v.solve = std::move(solved);
  double diam = 0.0;
  for (int i = 0; i < curve.size(); ++i)
    for (int j = i + 1; j < curve.size(); ++j) diam = std::max(diam, space->distance(curve.vertices[i], curve.vertices[j]));
  const double delta = opt.delta_fraction * diam;
  if (injectivity) {
    if (std::abs(injectivity->delta - delta) > 1e-12 * delta ||
        std::abs(injectivity->epsilon - opt.epsilon_ratio * delta) > 1e-12 * delta)
      throw Error(ErrorCode::InvalidArgument, "injectivity report uses other delta/epsilon");
    v.injectivity = *injectivity;
  } else {
    v.injectivity = injectivity_report(v.solve->map, delta, opt.epsilon_ratio * delta);
  }
  const bool at_threshold = std::abs(v.kappa - 4 * M_PI) <= opt.tol_kappa;
  if (v.injectivity->embedded) {
    if (v.kappa < 4 * M_PI - opt.tol_kappa) {
      v.verdict = Verdict::Embedded;
      os << "kappa/pi = " << v.kappa / M_PI << " < 4, min_ratio = " << v.injectivity->min_ratio;
    } else {
      v.verdict = Verdict::Inconclusive;
      os << "injective at kappa/pi = " << v.kappa / M_PI;
    }
    v.reason = os.str();
    return v;
  }
  if (!at_threshold) {
    v.verdict = Verdict::Inconclusive;
    os << "not injective below 4pi (min_ratio = " << v.injectivity->min_ratio << "), refine the mesh";
    v.reason = os.str();
    return v;
  }
  const PullbackMetric pb = pullback_metric(v.solve->map);
  v.flatness = flatness_report(pb, opt.flat_tol, 1, -2 * M_PI, 0.1);
  if (growth) {
    v.growth = *growth;
  } else if (!opt.skip_funnel) {
    try {
      const FunnelPtr ext = build_funnel(space, curve);
      const ExtendedMap em = extend_plateau(*v.solve, ext, opt.funnel_rings);
      const double cap = 0.8 * ext->truncation();
      v.growth = area_growth(em, *ext, v.solve->map.images[0], radius_grid(cap / 8, cap, 8));
    } catch (const Error& e) {
      v.verdict = Verdict::Inconclusive;
      v.reason = std::string("funnel failed: ") + e.what();
      return v;
    }
  }
  if (v.flatness->rigid_cone) {
    v.verdict = Verdict::RigidConeCandidate;
    os << "kappa = 4pi, not injective, flat with one cone defect " << v.flatness->cone_defect_sum;
  } else {
    v.verdict = Verdict::Inconclusive;
    os << "kappa = 4pi, not injective, flatness check failed";
  }
  v.reason = os.str();
  return v;
}

}  // namespace plateau
