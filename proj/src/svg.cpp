#include "bitlab/svg.hpp"

#include <cmath>
#include <sstream>

namespace bitlab {

namespace {

// Point of the upper hemisphere over disk coordinates.
void disk_to_proj(double a, double b, double* xyz) {
    double r2 = a * a + b * b;
    xyz[0] = a;
    xyz[1] = b;
    xyz[2] = std::sqrt(std::max(0.0, 1.0 - r2));
}

// Disk coordinates of a projective point (sign chosen so z >= 0).
void proj_to_disk(const double* xyz, double* ab) {
    double n = std::sqrt(xyz[0] * xyz[0] + xyz[1] * xyz[1] + xyz[2] * xyz[2]);
    double s = xyz[2] < 0 ? -1.0 : 1.0;
    ab[0] = s * xyz[0] / n;
    ab[1] = s * xyz[1] / n;
}

}  // namespace

std::string svg_plot(const Poly& curve, const std::vector<BitangentRecord>& records, int size_px) {
    FloatPoly f(curve);
    const int N = 420;  // sampling grid across the disk
    std::ostringstream svg;
    double S = size_px;
    auto px = [S](double v) { return (v + 1.05) / 2.1 * S; };
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << size_px << "' height='"
        << size_px << "' viewBox='0 0 " << size_px << " " << size_px << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<circle cx='" << px(0) << "' cy='" << px(0) << "' r='" << S / 2.1
        << "' fill='#f8f8f8' stroke='#999' stroke-dasharray='6 4'/>\n";

    // Real bitangents as projected great-circle arcs.
    for (const auto& rec : records) {
        if (!rec.is_real()) continue;
        double l[3] = {rec.line[0].real(), rec.line[1].real(), rec.line[2].real()};
        double ln = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
        if (ln == 0) continue;
        for (auto& v : l) v /= ln;
        // Orthonormal basis of the plane l . p = 0.
        double e1[3], e2[3];
        double ref[3] = {1, 0, 0};
        if (std::abs(l[0]) > 0.8) {
            ref[0] = 0;
            ref[1] = 1;
        }
        e1[0] = l[1] * ref[2] - l[2] * ref[1];
        e1[1] = l[2] * ref[0] - l[0] * ref[2];
        e1[2] = l[0] * ref[1] - l[1] * ref[0];
        double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
        for (auto& v : e1) v /= n1;
        e2[0] = l[1] * e1[2] - l[2] * e1[1];
        e2[1] = l[2] * e1[0] - l[0] * e1[2];
        e2[2] = l[0] * e1[1] - l[1] * e1[0];
        const char* color = rec.cls == RealityClass::real_t2 ? "#3465a4" : "#a40000";
        std::ostringstream path;
        bool pen_up = true;
        double prev[2] = {0, 0};
        for (int i = 0; i <= 360; ++i) {
            double th = i * M_PI / 180.0;
            double p[3];
            for (int c = 0; c < 3; ++c) p[c] = std::cos(th) * e1[c] + std::sin(th) * e2[c];
            double ab[2];
            proj_to_disk(p, ab);
            bool jump = !pen_up && (std::hypot(ab[0] - prev[0], ab[1] - prev[1]) > 0.2);
            if (pen_up || jump)
                path << "M" << px(ab[0]) << " " << px(ab[1]) << " ";
            else
                path << "L" << px(ab[0]) << " " << px(ab[1]) << " ";
            prev[0] = ab[0];
            prev[1] = ab[1];
            pen_up = false;
        }
        svg << "<path d='" << path.str() << "' fill='none' stroke='" << color
            << "' stroke-width='0.6' opacity='0.55'/>\n";
    }

    // Curve: sign changes of F over the sampled disk.
    std::vector<int8_t> sgn((N + 1) * (N + 1), 0);
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            double a = -1.0 + 2.0 * i / N, b = -1.0 + 2.0 * j / N;
            if (a * a + b * b > 1.0) continue;
            double p[3];
            disk_to_proj(a, b, p);
            double v = f.eval(p);
            sgn[i * (N + 1) + j] = v > 0 ? 1 : (v < 0 ? -1 : 0);
        }
    }
    double cellpx = S / 2.1 * 2.0 / N;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            int8_t s00 = sgn[i * (N + 1) + j], s10 = sgn[(i + 1) * (N + 1) + j];
            int8_t s01 = sgn[i * (N + 1) + j + 1], s11 = sgn[(i + 1) * (N + 1) + j + 1];
            if (s00 == 0 && s10 == 0 && s01 == 0 && s11 == 0) continue;
            bool change = (s00 && s10 && s00 != s10) || (s00 && s01 && s00 != s01) ||
                          (s11 && s10 && s11 != s10) || (s11 && s01 && s11 != s01);
            if (!change) continue;
            double a = -1.0 + 2.0 * (i + 0.5) / N, b = -1.0 + 2.0 * (j + 0.5) / N;
            svg << "<rect x='" << px(a) - cellpx / 2 << "' y='" << px(b) - cellpx / 2
                << "' width='" << cellpx << "' height='" << cellpx << "' fill='black'/>\n";
        }
    }

    // Tangency markers with local side signs.
    for (const auto& rec : records) {
        if (rec.cls != RealityClass::real_t2) continue;
        int ls[2] = {rec.sign_p1, rec.sign_p2};
        for (int k = 0; k < 2; ++k) {
            double p[3] = {rec.points[k][0].real(), rec.points[k][1].real(),
                           rec.points[k][2].real()};
            double ab[2];
            proj_to_disk(p, ab);
            const char* fill = ls[k] > 0 ? "#4e9a06" : (ls[k] < 0 ? "#ce5c00" : "#888");
            svg << "<circle cx='" << px(ab[0]) << "' cy='" << px(ab[1])
                << "' r='2.2' fill='" << fill << "' stroke='black' stroke-width='0.4'/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace bitlab
