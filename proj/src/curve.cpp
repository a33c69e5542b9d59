#include "lcurves/curve.hpp"

#include <cmath>
#include <istream>
#include <memory>
#include <sstream>

#include "lcurves/errors.hpp"

namespace lcurves {

Curve rotate_curve(const Mat3& R, const Curve& c, std::string source) {
    CurveMeta meta = c.meta();
    if (!source.empty()) meta.source = std::move(source);
    return Curve([R, c](double t) {
        CurveJet j = c(t);
        return CurveJet{R * j.p, R * j.v, R * j.a};
    }, meta);
}

Curve affine_reparam(const Curve& c, double lo, double hi, CurveMeta meta) {
    double k = hi - lo;
    return Curve([c, lo, k](double t) {
        CurveJet j = c(lo + k * t);
        return CurveJet{j.p, j.v * k, j.a * (k * k)};
    }, std::move(meta));
}

Curve reparam(const Curve& c, std::function<void(double, double&, double&, double&)> sigma,
              CurveMeta meta) {
    return Curve([c, sigma](double t) {
        double u, du, ddu;
        sigma(t, u, du, ddu);
        CurveJet j = c(u);
        return CurveJet{j.p, j.v * du, j.a * (du * du) + j.v * ddu};
    }, std::move(meta));
}

namespace {

struct SampledData {
    std::vector<Vec3> pts;
    bool periodic = false;
    double h = 0.0;
};

// Degree-4 Lagrange interpolation through 5 consecutive samples, evaluated
// with two derivatives. At a node this reproduces the order-4 centered
// finite-difference formulas.
CurveJet eval_sampled(const SampledData& d, double t) {
    const int n = static_cast<int>(d.pts.size()) - 1;  // nodes 0..n
    double u = std::min(std::max(t, 0.0), 1.0) * n;
    int center = static_cast<int>(std::lround(u));
    int lo = center - 2;
    if (!d.periodic) lo = std::min(std::max(lo, 0), n - 4);
    double x = u - lo;  // in [~0,4]

    auto node = [&](int i) {
        int k = lo + i;
        if (d.periodic) {
            k %= n;
            if (k < 0) k += n;
        }
        return d.pts[static_cast<size_t>(k)];
    };

    // Lagrange basis over nodes 0..4 and its first two derivatives at x.
    double L[5], dL[5], ddL[5];
    for (int i = 0; i < 5; ++i) {
        double denom = 1.0;
        for (int j = 0; j < 5; ++j)
            if (j != i) denom *= (i - j);
        double p = 1.0, dp = 0.0, ddp = 0.0;
        for (int j = 0; j < 5; ++j) {
            if (j == i) continue;
            double f = x - j;
            ddp = ddp * f + 2.0 * dp;
            dp = dp * f + p;
            p *= f;
        }
        L[i] = p / denom;
        dL[i] = dp / denom;
        ddL[i] = ddp / denom;
    }

    Vec3 p{}, v{}, a{};
    for (int i = 0; i < 5; ++i) {
        Vec3 q = node(i);
        p += q * L[i];
        v += q * dL[i];
        a += q * ddL[i];
    }
    double s = 1.0 / d.h;
    return CurveJet{p, v * s, a * (s * s)};
}

}  // namespace

Curve curve_from_samples(const std::vector<Vec3>& samples, bool periodic) {
    if (samples.size() < 5) throw BadInput("curve_from_samples: need at least 5 samples");
    auto data = std::make_shared<SampledData>();
    data->pts.reserve(samples.size());
    for (const Vec3& p : samples) {
        double n = p.norm();
        if (std::abs(n - 1.0) > 1e-3)
            throw BadInput("curve_from_samples: sample norm deviates from 1 by more than 1e-3");
        data->pts.push_back(p / n);
    }
    data->periodic = periodic;
    data->h = 1.0 / (static_cast<double>(samples.size()) - 1.0);

    CurveMeta meta;
    meta.source = "sampled";
    Vec3 first = data->pts.front(), last = data->pts.back();
    meta.closed_in_L = distance(first, e1) < 1e-8 && distance(last, e1) < 1e-8;
    return Curve([data](double t) { return eval_sampled(*data, t); }, meta);
}

Curve curve_from_stream(std::istream& in) {
    std::string word;
    long n = -1;
    if (!(in >> word) || word != "samples" || !(in >> n) || n < 4)
        throw BadInput("expected header \"samples N\" with N >= 4");
    std::vector<Vec3> pts;
    pts.reserve(static_cast<size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) {
        Vec3 p;
        if (!(in >> p.x >> p.y >> p.z))
            throw BadInput("expected " + std::to_string(n + 1) + " coordinate triples");
        pts.push_back(p);
    }
    bool periodic = distance(pts.front(), pts.back()) < 1e-8;
    return curve_from_samples(pts, periodic);
}

}  // namespace lcurves
