#include "fcomp/angleio.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fcomp::angleio {
namespace {

[[noreturn]] void bad(const std::string& text) {
    throw std::invalid_argument("cannot parse angle '" + text +
                                "' (expected e.g. \"pi/16\", \"-3pi/4\", \"0.5pi\" or a number)");
}

std::string strip(const std::string& text) {
    std::string out;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

} // namespace

double parse_angle(const std::string& text) {
    const std::string s = strip(text);
    if (s.empty()) bad(text);

    const size_t pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) {
        char* end = nullptr;
        const double value = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || !std::isfinite(value)) bad(text);
        return value;
    }

    double coef = 1.0;
    std::string head = s.substr(0, pi_pos);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (head == "-")
        coef = -1.0;
    else if (head == "+" || head.empty())
        coef = 1.0;
    else {
        char* end = nullptr;
        coef = std::strtod(head.c_str(), &end);
        if (end != head.c_str() + head.size() || !std::isfinite(coef)) bad(text);
    }

    double denom = 1.0;
    const std::string tail = s.substr(pi_pos + 2);
    if (!tail.empty()) {
        if (tail[0] != '/' || tail.size() < 2) bad(text);
        char* end = nullptr;
        denom = std::strtod(tail.c_str() + 1, &end);
        if (end != tail.c_str() + tail.size() || denom == 0.0 || !std::isfinite(denom)) bad(text);
    }
    return coef * M_PI / denom;
}

std::string format_angle(double radians) {
    if (radians == 0.0) return "0";
    const double x = radians / M_PI;
    // small-denominator rational detection for the pi multiple
    for (int q = 1; q <= 64; ++q) {
        const double pf = x * q;
        const double p = std::round(pf);
        if (std::abs(pf - p) <= 1e-12 * q && p != 0.0) {
            std::string out;
            if (p == -1.0)
                out = "-pi";
            else if (p == 1.0)
                out = "pi";
            else {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.0fpi", p);
                out = buf;
            }
            if (q > 1) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "/%d", q);
                out += buf;
            }
            return out;
        }
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", radians);
    return buf;
}

} // namespace fcomp::angleio
