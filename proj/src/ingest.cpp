#include "gazelens/ingest.hpp"

#include "gazelens/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace gazelens {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::target: return "target";
        case EventKind::click: return "click";
        case EventKind::other: return "other";
    }
    return "other";
}

void ScreenConfig::validate() const {
    if (!(width > 0.0) || !(height > 0.0)) throw ConfigError("screen dimensions must be positive");
    if (!(aoi_tolerance >= 0.0)) throw ConfigError("aoi tolerance must be non-negative");
    if (!(min_aoi_size >= 1.0)) throw ConfigError("minimum AOI size must be at least 1 pixel");
}

AoiMap::AoiMap(std::vector<AoiRect> aois, double tolerance)
    : aois_(std::move(aois)), tolerance_(tolerance) {
    inflated_.reserve(aois_.size());
    const Point2 pad = Point2::Constant(tolerance_);
    for (const auto& a : aois_) {
        Eigen::AlignedBox2d box = a.box();
        inflated_.emplace_back(box.min() - pad, box.max() + pad);
    }
}

std::optional<std::size_t> AoiMap::find(const Point2& p) const {
    for (std::size_t i = 0; i < inflated_.size(); ++i) {
        if (inflated_[i].contains(p)) return i;
    }
    return std::nullopt;
}

std::optional<std::string> map_to_aoi(const Point2& p, const AoiMap& map) {
    if (auto idx = map.find(p)) return map.aois()[*idx].name;
    return std::nullopt;
}

namespace {

// Fits one axis: grow about the center to `min_size`, cap at `extent`,
// then translate into [0, extent]. Untouched when already valid.
void fit_axis(double& origin, double& size, double min_size, double extent, bool& clamped) {
    if (size < min_size || size > extent) {
        const double center = origin + size / 2.0;
        size = std::max(size, min_size);
        if (size > extent) {
            size = extent;
            clamped = true;
        }
        origin = center - size / 2.0;
    }
    if (origin < 0.0) origin = 0.0;
    if (origin + size > extent) origin = extent - size;
}

}  // namespace

AoiRect normalize_aoi(const AoiRect& aoi, const ScreenConfig& screen, Diagnostics* diag) {
    if (!(aoi.w > 0.0) || !(aoi.h > 0.0)) {
        throw ConfigError("AOI '" + aoi.name + "' must have a positive size");
    }
    AoiRect out = aoi;
    bool clamped = false;
    fit_axis(out.x, out.w, screen.min_aoi_size, screen.width, clamped);
    fit_axis(out.y, out.h, screen.min_aoi_size, screen.height, clamped);
    if (clamped && diag) diag->warn("AOI '" + aoi.name + "' is larger than the screen; clamped");
    return out;
}

AoiMap make_aoi_map(const std::vector<AoiRect>& aois, const ScreenConfig& screen, Diagnostics* diag) {
    std::vector<AoiRect> normalized;
    normalized.reserve(aois.size());
    for (const auto& a : aois) normalized.push_back(normalize_aoi(a, screen, diag));
    return AoiMap(std::move(normalized), screen.aoi_tolerance);
}

namespace {

bool parse_number(std::string_view text, double& out) {
    const std::string t = csv::trim(text);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool contains_any(std::string_view text, const std::vector<std::string>& tokens) {
    const std::string l = lower(text);
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& tok) {
        return !tok.empty() && l.find(lower(tok)) != std::string::npos;
    });
}

}  // namespace

Point2 parse_point(std::string_view raw, std::size_t row) {
    if (is_blank(raw)) throw MissingCoordinateError("missing gaze coordinate", row);
    std::string body = csv::trim(raw);
    const bool open = body.front() == '(';
    const bool close = body.back() == ')';
    if (open != close) throw ParseError("unbalanced parentheses in '" + std::string(raw) + "'", row);
    if (open) body = body.substr(1, body.size() - 2);
    const auto comma = body.find(',');
    if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos) {
        throw ParseError("expected two comma-separated numbers in '" + std::string(raw) + "'", row);
    }
    double x = 0.0;
    double y = 0.0;
    if (!parse_number(std::string_view(body).substr(0, comma), x) ||
        !parse_number(std::string_view(body).substr(comma + 1), y)) {
        throw ParseError("malformed coordinate '" + std::string(raw) + "'", row);
    }
    return Point2(x, y);
}

Point2 to_screen(const Point2& p, const ScreenConfig& screen, Units x_units, Units y_units) {
    const double x = x_units == Units::normalized ? p.x() * screen.width : p.x();
    double y;
    if (y_units == Units::normalized) {
        y = screen.y_origin == YOrigin::bottom ? (1.0 - p.y()) * screen.height : p.y() * screen.height;
    } else {
        y = screen.y_origin == YOrigin::bottom ? screen.height - p.y() : p.y();
    }
    return Point2(x, y);
}

bool looks_normalized(std::span<const double> values) {
    if (values.empty()) return false;
    const auto inside = std::count_if(values.begin(), values.end(),
                                      [](double v) { return v >= 0.0 && v <= 1.0; });
    return static_cast<double>(inside) >= 0.99 * static_cast<double>(values.size());
}

EventKind EventRules::classify(std::string_view event) const {
    if (contains_any(event, click_tokens)) return EventKind::click;
    if (contains_any(event, target_tokens)) return EventKind::target;
    return EventKind::other;
}

bool EventRules::diverts(std::string_view event) const {
    return !is_blank(event) && contains_any(event, divert_tokens);
}

namespace {

class Header {
public:
    explicit Header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) index_[csv::trim(names[i])] = i;
    }
    std::optional<std::size_t> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::unordered_map<std::string, std::size_t> index_;
};

std::string_view field(const std::vector<std::string>& row, std::optional<std::size_t> col) {
    if (!col || *col >= row.size()) return {};
    return row[*col];
}

double parse_required(std::string_view text, const char* what, std::size_t row) {
    double v = 0.0;
    if (!parse_number(text, v)) throw ParseError(std::string("malformed ") + what + " '" + std::string(text) + "'", row);
    return v;
}

long long parse_integer(std::string_view text, const char* what, std::size_t row) {
    const std::string t = csv::trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ParseError(std::string("malformed ") + what + " '" + std::string(text) + "'", row);
    }
    return v;
}

}  // namespace

RawSession read_session(std::istream& in, const IngestOptions& options, const ScreenConfig& screen) {
    screen.validate();
    RawSession session;
    session.screen = screen;
    session.event_rules = options.events;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!is_blank(line)) break;
    }
    if (is_blank(line)) throw ParseError("missing header row", line_no);
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

    const char delim = options.delimiter;
    const ColumnMap& cols = options.columns;
    const Header header(csv::split_row(line, delim));
    const auto c_time = header.find(cols.timestamp);
    const auto c_gaze = header.find(cols.gaze);
    const auto c_gx = header.find(cols.gaze_x);
    const auto c_gy = header.find(cols.gaze_y);
    const auto c_event = header.find(cols.event);
    const auto c_level = header.find(cols.level);
    const auto c_aoi = header.find(cols.aoi_name);
    if (!c_time) throw ParseError("header lacks timestamp column '" + cols.timestamp + "'", line_no);
    if (!c_gaze && !(c_gx && c_gy)) {
        throw ParseError("header lacks gaze column '" + cols.gaze + "' or the pair '" + cols.gaze_x +
                             "','" + cols.gaze_y + "'",
                         line_no);
    }

    std::optional<Millis> last_time;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const auto row = csv::split_row(line, delim);

        if (c_aoi && !is_blank(field(row, c_aoi))) {
            AoiRect a;
            a.name = csv::trim(field(row, c_aoi));
            a.x = parse_required(field(row, header.find(cols.aoi_x)), "aoi_x", line_no);
            a.y = parse_required(field(row, header.find(cols.aoi_y)), "aoi_y", line_no);
            a.w = parse_required(field(row, header.find(cols.aoi_w)), "aoi_w", line_no);
            a.h = parse_required(field(row, header.find(cols.aoi_h)), "aoi_h", line_no);
            const std::string role = lower(csv::trim(field(row, header.find(cols.aoi_role))));
            a.is_bin = role.empty() || role == "bin";
            session.inline_aois.push_back(std::move(a));
            continue;
        }

        RawSample s;
        s.row = line_no;
        const long long t = parse_integer(field(row, c_time), "timestamp", line_no);
        if (t < 0) throw ParseError("negative timestamp", line_no);
        s.timestamp = t;
        if (last_time && s.timestamp < *last_time) throw ParseError("timestamp decreases", line_no);
        last_time = s.timestamp;
        if (c_level && !is_blank(field(row, c_level))) {
            s.level = static_cast<LevelId>(parse_integer(field(row, c_level), "level", line_no));
        }
        s.event = csv::trim(field(row, c_event));

        try {
            if (c_gaze) {
                s.source = parse_point(field(row, c_gaze), line_no);
            } else {
                const auto gx = field(row, c_gx);
                const auto gy = field(row, c_gy);
                if (is_blank(gx) || is_blank(gy)) throw MissingCoordinateError("missing gaze coordinate", line_no);
                s.source = Point2(parse_required(gx, "gaze_x", line_no), parse_required(gy, "gaze_y", line_no));
            }
        } catch (const MissingCoordinateError&) {
            s.source.reset();
        }

        if (!s.event.empty()) {
            session.events.push_back(
                TimelineEvent{s.timestamp, options.events.classify(s.event), s.event, s.level});
        }
        session.samples.push_back(std::move(s));
    }

    // Unit detection ignores (0,0) rows, which mark tracking loss.
    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t pairs = 0;
    std::size_t pairs_in_unit = 0;
    for (const auto& s : session.samples) {
        if (!s.source || s.source->isZero(0.0)) continue;
        xs.push_back(s.source->x());
        ys.push_back(s.source->y());
        ++pairs;
        if (s.source->minCoeff() >= 0.0 && s.source->maxCoeff() <= 1.0) ++pairs_in_unit;
    }
    switch (options.coords) {
        case CoordMode::normalized:
            session.x_units = session.y_units = Units::normalized;
            break;
        case CoordMode::pixel:
            session.x_units = session.y_units = Units::pixel;
            break;
        case CoordMode::automatic:
            if (c_gaze) {
                const bool norm = pairs > 0 && static_cast<double>(pairs_in_unit) >= 0.99 * static_cast<double>(pairs);
                session.x_units = session.y_units = norm ? Units::normalized : Units::pixel;
            } else {
                session.x_units = looks_normalized(xs) ? Units::normalized : Units::pixel;
                session.y_units = looks_normalized(ys) ? Units::normalized : Units::pixel;
            }
            break;
    }
    for (auto& s : session.samples) {
        if (s.source) s.pos = to_screen(*s.source, screen, session.x_units, session.y_units);
    }
    return session;
}

std::vector<AoiRect> read_aoi_sidecar(std::istream& in) {
    std::vector<AoiRect> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() != 5 && tok.size() != 6) throw ParseError("AOI line needs 'name x y w h [role]'", line_no);
        AoiRect a;
        a.name = tok[0];
        a.x = parse_required(tok[1], "aoi x", line_no);
        a.y = parse_required(tok[2], "aoi y", line_no);
        a.w = parse_required(tok[3], "aoi w", line_no);
        a.h = parse_required(tok[4], "aoi h", line_no);
        if (tok.size() == 6) {
            const std::string role = lower(tok[5]);
            if (role != "bin" && role != "other") throw ParseError("AOI role must be 'bin' or 'other'", line_no);
            a.is_bin = role == "bin";
        }
        out.push_back(std::move(a));
    }
    return out;
}

CleanSession filter_samples(const RawSession& session) {
    CleanSession clean;
    clean.events = session.events;
    clean.aoi_map = session.aoi_map;
    clean.screen = session.screen;
    clean.diag = session.diag;

    const EventRules& rules = session.event_rules;
    std::set<LevelId> levels;
    for (const auto& s : session.samples) {
        levels.insert(s.level);
        const bool event_only = !s.source && !s.event.empty();
        if (rules.diverts(s.event) || event_only) {
            ++clean.diverted_count;
            continue;
        }
        const bool valid = s.source && s.pos && !s.source->isZero(0.0) && !s.pos->isZero(0.0) &&
                           session.screen.contains(*s.pos);
        if (!valid) {
            ++clean.dropped_count;
            continue;
        }
        clean.samples.push_back(GazeSample{s.timestamp, *s.pos, s.level, s.event});
    }
    if (clean.samples.empty()) {
        throw EmptySessionError("no valid gaze samples after filtering (" +
                                std::to_string(clean.dropped_count) + " dropped)");
    }
    clean.levels.assign(levels.begin(), levels.end());
    return clean;
}

std::vector<GazeSample> CleanSession::level_samples(LevelId level) const {
    std::vector<GazeSample> out;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(out),
                 [level](const GazeSample& s) { return s.level == level; });
    return out;
}

std::vector<TimelineEvent> CleanSession::level_events(LevelId level) const {
    std::vector<TimelineEvent> out;
    std::copy_if(events.begin(), events.end(), std::back_inserter(out),
                 [level](const TimelineEvent& e) { return e.level == level; });
    return out;
}

}  // namespace gazelens
