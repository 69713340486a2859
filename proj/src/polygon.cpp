#include "isoc/polygon.hpp"

#include <algorithm>
#include <sstream>

namespace isoc {

SlopeVector::SlopeVector(std::vector<Rational> entries) : v_(std::move(entries)) {
    for (auto& q : v_) q.canonicalize();
    std::sort(v_.begin(), v_.end(), [](const Rational& a, const Rational& b) { return a > b; });
}

SlopeVector SlopeVector::integral(const std::vector<long>& entries) {
    std::vector<Rational> v;
    v.reserve(entries.size());
    for (long e : entries) v.emplace_back(e);
    return SlopeVector(std::move(v));
}

Rational SlopeVector::total() const {
    Rational t(0);
    for (const auto& q : v_) t += q;
    return t;
}

bool SlopeVector::is_integral() const {
    for (const auto& q : v_)
        if (q.get_den() != 1) return false;
    return true;
}

std::string SlopeVector::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < v_.size(); ++i) {
        if (i) os << ", ";
        os << v_[i].get_str();
    }
    os << "]";
    return os.str();
}

SlopeVector SlopeVector::parse(const std::string& text) {
    std::vector<Rational> out;
    std::string body = text;
    auto l = body.find('[');
    auto r = body.rfind(']');
    if (l != std::string::npos && r != std::string::npos && r > l)
        body = body.substr(l + 1, r - l - 1);
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        // trim
        size_t b = tok.find_first_not_of(" \t");
        size_t e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        tok = tok.substr(b, e - b + 1);
        try {
            out.emplace_back(Rational(tok));
        } catch (const std::exception&) {
            throw input_error("cannot parse rational '" + tok + "'");
        }
    }
    if (out.empty()) throw input_error("empty slope vector");
    return SlopeVector(std::move(out));
}

NewtonPolygon NewtonPolygon::of(const SlopeVector& lambda) {
    NewtonPolygon p;
    p.verts_.emplace_back(Rational(0), Rational(0));
    if (lambda.size() == 0) return p;
    // increasing slopes left to right: traverse entries from smallest
    std::vector<Rational> asc(lambda.entries().rbegin(), lambda.entries().rend());
    Rational x(0), y(0);
    size_t i = 0;
    while (i < asc.size()) {
        size_t j = i;
        while (j < asc.size() && asc[j] == asc[i]) ++j;
        Rational mult(static_cast<long>(j - i));
        x += mult;
        y += mult * asc[i];
        p.verts_.emplace_back(x, y);
        i = j;
    }
    return p;
}

Rational NewtonPolygon::value_at(const Rational& x) const {
    for (size_t k = 0; k + 1 < verts_.size(); ++k) {
        if (x >= verts_[k].first && x <= verts_[k + 1].first) {
            const Rational& x1 = verts_[k].first;
            const Rational& y1 = verts_[k].second;
            const Rational& x2 = verts_[k + 1].first;
            const Rational& y2 = verts_[k + 1].second;
            if (x1 == x2) return y1;
            return y1 + (y2 - y1) * (x - x1) / (x2 - x1);
        }
    }
    if (!verts_.empty() && x == verts_.front().first) return verts_.front().second;
    throw input_error("polygon evaluated outside its support");
}

std::string NewtonPolygon::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < verts_.size(); ++i) {
        if (i) os << " ";
        os << "(" << verts_[i].first.get_str() << "," << verts_[i].second.get_str() << ")";
    }
    return os.str();
}

bool dominance_leq(const SlopeVector& a, const SlopeVector& b) {
    if (a.size() != b.size()) throw length_mismatch();
    Rational sa(0), sb(0);
    for (size_t i = 0; i + 1 < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
        if (sa > sb) return false;
    }
    if (a.size() > 0) {
        sa += a[a.size() - 1];
        sb += b[b.size() - 1];
    }
    return sa == sb;
}

bool polygon_above_same_endpoints(const SlopeVector& a, const SlopeVector& b) {
    if (a.size() != b.size()) throw length_mismatch();
    NewtonPolygon pa = NewtonPolygon::of(a);
    NewtonPolygon pb = NewtonPolygon::of(b);
    if (pa.endpoint() != pb.endpoint()) return false;
    // piecewise-linear comparison: checking at every vertex abscissa of either
    // polygon suffices
    for (const auto& v : pa.vertices())
        if (pa.value_at(v.first) < pb.value_at(v.first)) return false;
    for (const auto& v : pb.vertices())
        if (pa.value_at(v.first) < pb.value_at(v.first)) return false;
    return true;
}

bool polygon_below_pointwise(const SlopeVector& a, const SlopeVector& b) {
    if (a.size() != b.size()) throw length_mismatch();
    NewtonPolygon pa = NewtonPolygon::of(a);
    NewtonPolygon pb = NewtonPolygon::of(b);
    for (const auto& v : pa.vertices())
        if (pa.value_at(v.first) > pb.value_at(v.first)) return false;
    for (const auto& v : pb.vertices())
        if (pa.value_at(v.first) > pb.value_at(v.first)) return false;
    return true;
}

}  // namespace isoc
