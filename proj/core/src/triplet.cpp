#include "mlevy/euclid/triplet.hpp"

#include <nlohmann/json.hpp>

#include "mlevy/errors.hpp"

namespace mlevy {

void LevyTriplet::validate() const {
    const int d = dim();
    if (a.rows() != d || a.cols() != d || sigma.rows() != d || sigma.cols() != d)
        throw Error("triplet dimension mismatch");
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("diffusion matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw Error("diffusion matrix must be positive semidefinite");
    if ((sigma * sigma.transpose() - a).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("sigma is not a factor of a");
    if (nu.total_intensity() > 0.0) {
        nu.validate();
        if (nu.dim != d) throw Error("jump measure dimension mismatch");
    }
}

LevyTriplet make_triplet(Mat a, Vec b, JumpMeasureSpec nu) {
    LevyTriplet t;
    t.sigma = psd_sqrt(a);
    t.a = std::move(a);
    t.b = std::move(b);
    t.nu = std::move(nu);
    t.validate();
    return t;
}

LevyTriplet make_continuous_triplet(Mat a, Vec b) {
    JumpMeasureSpec nu;
    nu.kind = MeasureKind::point_masses;
    nu.dim = static_cast<int>(b.size());
    nu.atoms.clear();
    return make_triplet(std::move(a), std::move(b), std::move(nu));
}

void to_json(nlohmann::json& j, const LevyTriplet& t) {
    const int d = t.dim();
    std::vector<std::vector<double>> a(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        a[static_cast<std::size_t>(i)].assign(t.a.row(i).begin(), t.a.row(i).end());
    std::vector<double> b(t.b.data(), t.b.data() + d);
    j = nlohmann::json{{"a", a}, {"b", b}};
    nlohmann::json nu;
    to_json(nu, t.nu);
    j["nu"] = std::move(nu);
}

void from_json(const nlohmann::json& j, LevyTriplet& t) {
    const auto a_rows = j.at("a").get<std::vector<std::vector<double>>>();
    const auto b = j.at("b").get<std::vector<double>>();
    const int d = static_cast<int>(b.size());
    Mat a(d, d);
    if (static_cast<int>(a_rows.size()) != d) throw Error("triplet: a has wrong shape");
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(a_rows[static_cast<std::size_t>(i)].size()) != d)
            throw Error("triplet: a has wrong shape");
        for (int k = 0; k < d; ++k) a(i, k) = a_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    JumpMeasureSpec nu;
    if (j.contains("nu") && !j.at("nu").is_null()) {
        from_json(j.at("nu"), nu);
    } else {
        nu.kind = MeasureKind::point_masses;
        nu.dim = d;
    }
    t = make_triplet(std::move(a), Eigen::Map<const Vec>(b.data(), d), std::move(nu));
}

} // namespace mlevy
