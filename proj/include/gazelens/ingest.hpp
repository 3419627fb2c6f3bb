// Session log parsing, coordinate repair, sample filtering and the AOI
// spatial framework.
#pragma once

#include "gazelens/core.hpp"

#include <Eigen/Geometry>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazelens {

enum class YOrigin { top, bottom };

struct ScreenConfig {
    double width = 1920.0;
    double height = 1080.0;
    double aoi_tolerance = 50.0;
    double min_aoi_size = 80.0;
    YOrigin y_origin = YOrigin::top;

    /// Throws ConfigError when an invariant does not hold.
    void validate() const;

    /// 0 <= x < width and 0 <= y < height.
    bool contains(const Point2& p) const {
        return p.x() >= 0.0 && p.x() < width && p.y() >= 0.0 && p.y() < height;
    }
};

struct AoiRect {
    std::string name;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
    bool is_bin = true;  ///< counts toward task relevance

    Eigen::AlignedBox2d box() const {
        return Eigen::AlignedBox2d(Point2(x, y), Point2(x + w, y + h));
    }
    Point2 center() const { return Point2(x + w / 2.0, y + h / 2.0); }

    bool operator==(const AoiRect&) const = default;
};

/// Ordered AOI list plus the lookup tolerance. Lookup is first-match-wins
/// in declaration order over rectangles inflated by the tolerance.
class AoiMap {
public:
    AoiMap() = default;
    AoiMap(std::vector<AoiRect> aois, double tolerance);

    const std::vector<AoiRect>& aois() const { return aois_; }
    double tolerance() const { return tolerance_; }
    bool empty() const { return aois_.empty(); }

    /// Index of the first AOI whose inflated rectangle contains `p`.
    std::optional<std::size_t> find(const Point2& p) const;

private:
    std::vector<AoiRect> aois_;
    std::vector<Eigen::AlignedBox2d> inflated_;
    double tolerance_ = 0.0;
};

/// Name of the AOI under `p`, or nullopt.
std::optional<std::string> map_to_aoi(const Point2& p, const AoiMap& map);

/// Grows `aoi` symmetrically about its center to the minimum size and
/// translates it fully onto the screen. An AOI larger than the screen is
/// clamped to the screen and a warning is recorded.
AoiRect normalize_aoi(const AoiRect& aoi, const ScreenConfig& screen, Diagnostics* diag = nullptr);

AoiMap make_aoi_map(const std::vector<AoiRect>& aois, const ScreenConfig& screen,
                    Diagnostics* diag = nullptr);

/// Parses "(x, y)", "x,y" and the same with arbitrary surrounding spaces.
/// Blank input throws MissingCoordinateError; anything else malformed
/// throws ParseError. `row` is carried into the error.
Point2 parse_point(std::string_view raw, std::size_t row = 0);

enum class Units { pixel, normalized };

/// Maps a source point to top-left-origin screen pixels.
Point2 to_screen(const Point2& p, const ScreenConfig& screen, Units x_units, Units y_units);

inline Point2 to_screen(const Point2& p, const ScreenConfig& screen, Units units) {
    return to_screen(p, screen, units, units);
}

/// True iff at least 99% of `values` lie in [0, 1]. Empty input is pixel.
bool looks_normalized(std::span<const double> values);

enum class CoordMode { automatic, normalized, pixel };

struct ColumnMap {
    std::string timestamp = "timestamp_ms";
    std::string gaze = "gaze";
    std::string gaze_x = "gaze_x";
    std::string gaze_y = "gaze_y";
    std::string event = "event";
    std::string level = "level";
    std::string aoi_name = "aoi_name";
    std::string aoi_x = "aoi_x";
    std::string aoi_y = "aoi_y";
    std::string aoi_w = "aoi_w";
    std::string aoi_h = "aoi_h";
    std::string aoi_role = "aoi_role";
};

/// Case-insensitive substring rules mapping free-text events to kinds.
struct EventRules {
    std::vector<std::string> click_tokens{"picked trash", "click"};
    std::vector<std::string> target_tokens{"target", "spawn"};
    /// Rows whose event matches one of these leave the gaze stream.
    std::vector<std::string> divert_tokens{"picked trash"};

    EventKind classify(std::string_view event) const;
    bool diverts(std::string_view event) const;
};

struct IngestOptions {
    ColumnMap columns;
    CoordMode coords = CoordMode::automatic;
    EventRules events;
    char delimiter = ',';
};

struct RawSample {
    std::size_t row = 0;
    Millis timestamp = 0;
    std::optional<Point2> source;  ///< as read, before unit conversion
    std::optional<Point2> pos;     ///< screen pixels
    LevelId level = 0;
    std::string event;
};

struct RawSession {
    std::vector<RawSample> samples;
    std::vector<TimelineEvent> events;
    std::vector<AoiRect> inline_aois;
    AoiMap aoi_map;
    ScreenConfig screen;
    Units x_units = Units::pixel;
    Units y_units = Units::pixel;
    EventRules event_rules;
    Diagnostics diag;
};

struct CleanSession {
    std::vector<GazeSample> samples;
    std::vector<TimelineEvent> events;
    AoiMap aoi_map;
    ScreenConfig screen;
    std::size_t dropped_count = 0;   ///< invalid gaze rows removed
    std::size_t diverted_count = 0;  ///< event rows moved to the timeline only
    std::vector<LevelId> levels;     ///< ascending, every level seen in the raw rows
    Diagnostics diag;

    std::vector<GazeSample> level_samples(LevelId level) const;
    std::vector<TimelineEvent> level_events(LevelId level) const;
};

/// Reads a session table. Coordinates are converted to screen pixels
/// (unit detection per `options.coords`) but nothing is dropped yet.
RawSession read_session(std::istream& in, const IngestOptions& options, const ScreenConfig& screen);

/// Reads "name x y w h [bin|other]" lines; '#' starts a comment.
std::vector<AoiRect> read_aoi_sidecar(std::istream& in);

/// Drops missing, (0,0) and out-of-bounds samples plus diverted event rows.
/// Throws EmptySessionError when nothing survives.
CleanSession filter_samples(const RawSession& session);

}  // namespace gazelens
