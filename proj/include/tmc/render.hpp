#pragma once

// ASCII and SVG drawings of instances and solutions. Everything is first turned into a
// Picture on a half-unit lattice (lattice point (r,c) sits at (2c,2r), the centre of cell
// (r,c) at (2c+1,2r+1)); both writers only read the Picture, so output depends on the
// input alone.

#include <sstream>

#include "tmc/entryexit.hpp"
#include "tmc/gadget.hpp"
#include "tmc/grandtour.hpp"
#include "tmc/metacell.hpp"
#include "tmc/yagit.hpp"
#include "tmc/zahlen.hpp"

namespace tmc {

enum class Format { json, ascii, svg };

inline std::optional<Format> parse_format(std::string_view s)
{
    if (s == "json") return Format::json;
    if (s == "ascii") return Format::ascii;
    if (s == "svg") return Format::svg;
    return std::nullopt;
}

enum class Ink { grid, wall, exit, forced_exit, line, forced, path }; // drawing order

struct Stroke {
    int x1, y1, x2, y2; // half units
    Ink ink;
};

enum class Mark { vertex, dot };

struct Picture {
    int rows = 0, cols = 0; // cells
    std::vector<Stroke> strokes;
    std::map<std::pair<int, int>, Mark> marks; // (x, y) half units
    std::map<Coord, std::string> labels;
    std::vector<int> fill; // region per cell, empty for none
};

namespace detail {

inline Stroke lattice_stroke(const Edge& e, Ink ink) { return {2 * e.a.col, 2 * e.a.row, 2 * e.b.col, 2 * e.b.row, ink}; }
inline Stroke centre_stroke(const Edge& e, Ink ink)
{
    return {2 * e.a.col + 1, 2 * e.a.row + 1, 2 * e.b.col + 1, 2 * e.b.row + 1, ink};
}

// light lattice everywhere, heavy outline
inline void frame(Picture& p)
{
    for (const Edge& e : grid_edges({p.rows + 1, p.cols + 1})) {
        bool border = (e.a.row == e.b.row && (e.a.row == 0 || e.a.row == p.rows)) ||
                      (e.a.col == e.b.col && (e.a.col == 0 || e.a.col == p.cols));
        p.strokes.push_back(lattice_stroke(e, border ? Ink::wall : Ink::grid));
    }
}

// lattice segment between two side-by-side cells
inline Edge wall_between(Coord a, Coord b)
{
    if (a.row == b.row) {
        int c = std::max(a.col, b.col);
        return Edge({a.row, c}, {a.row + 1, c});
    }
    int r = std::max(a.row, b.row);
    return Edge({r, a.col}, {r, a.col + 1});
}

inline void cell_loop(Picture& p, const std::vector<Coord>& cells, bool closed)
{
    for (size_t i = 0; i + 1 < cells.size(); ++i) p.strokes.push_back(centre_stroke(Edge(cells[i], cells[i + 1]), Ink::path));
    if (closed && cells.size() > 2) p.strokes.push_back(centre_stroke(Edge(cells.back(), cells.front()), Ink::path));
}

} // namespace detail

inline Picture picture(const GrandTourInstance& inst, const GrandTourSolution* sol = nullptr)
{
    Picture p;
    p.rows = std::max(inst.vrows - 1, 0);
    p.cols = std::max(inst.vcols - 1, 0);
    for (const Edge& e : grid_edges(inst.dims())) p.strokes.push_back(detail::lattice_stroke(e, Ink::grid));
    if (sol)
        for (const Edge& e : sol->loop)
            if (!inst.forced.count(e)) p.strokes.push_back(detail::lattice_stroke(e, Ink::line));
    for (const Edge& e : inst.forced) p.strokes.push_back(detail::lattice_stroke(e, Ink::forced));
    for (int r = 0; r < inst.vrows; ++r)
        for (int c = 0; c < inst.vcols; ++c) p.marks[{2 * c, 2 * r}] = Mark::vertex;
    return p;
}

inline Picture picture(const EntryExitInstance& inst, const CellLoop* sol = nullptr)
{
    Picture p;
    p.rows = inst.rows;
    p.cols = inst.cols;
    Dims d = inst.dims();
    p.fill = inst.region_of;
    detail::frame(p);
    for (const Edge& e : grid_edges(d))
        if (inst.region(e.a) != inst.region(e.b)) p.strokes.push_back(detail::lattice_stroke(detail::wall_between(e.a, e.b), Ink::wall));
    if (sol) detail::cell_loop(p, sol->loop, true);
    return p;
}

inline Picture picture(const YagitInstance& inst, const YagitSolution* sol = nullptr)
{
    Picture p;
    p.rows = inst.rows;
    p.cols = inst.cols;
    detail::frame(p);
    for (int i = 0; i < inst.dims().size(); ++i)
        if (inst.animals[i] != Animal::none) p.labels[inst.dims().at(i)] = std::string(1, animal_char(inst.animals[i]));
    if (sol)
        for (auto& l : sol->lines)
            for (const Edge& e : line_segments(l)) p.strokes.push_back(detail::lattice_stroke(e, Ink::line));
    for (Coord q : inst.dots) p.marks[{2 * q.col, 2 * q.row}] = Mark::dot;
    return p;
}

inline Picture picture(const ZahlenInstance& inst, const CellPath* sol = nullptr)
{
    Picture p;
    p.rows = inst.rows;
    p.cols = inst.cols;
    detail::frame(p);
    for (int i = 0; i < inst.dims().size(); ++i) p.labels[inst.dims().at(i)] = std::to_string(inst.values[i]);
    if (sol) detail::cell_loop(p, sol->cells, inst.closed);
    return p;
}

inline Picture picture(const MetacellGridInstance& inst, const MetacellCycle* sol = nullptr)
{
    Picture p;
    p.rows = inst.rows;
    p.cols = inst.cols;
    detail::frame(p);
    Dims d = inst.dims();
    for (int i = 0; i < d.size(); ++i) {
        Coord c = d.at(i);
        int x = 2 * c.col + 1, y = 2 * c.row + 1;
        for (Dir dir : kDirs) {
            if (!inst.cells[i].has(dir)) continue;
            Coord s = step({y, x}, dir); // one half unit towards the side
            Ink ink = inst.cells[i].forced == dir ? Ink::forced_exit : Ink::exit;
            p.strokes.push_back({x, y, s.col, s.row, ink});
        }
    }
    if (sol)
        for (const Edge& e : sol->edges) p.strokes.push_back(detail::centre_stroke(e, Ink::path));
    return p;
}

inline Picture picture(const Gadget& g)
{
    switch (g.kind) {
    case GadgetKind::grandtour: return picture(GrandTourInstance{g.rows, g.cols, g.forced});
    case GadgetKind::entryexit: return picture(EntryExitInstance{g.rows, g.cols, g.region_of});
    case GadgetKind::yagit: return picture(YagitInstance{g.rows, g.cols, g.animals, g.dots});
    case GadgetKind::zahlen: {
        Picture p;
        p.rows = g.rows;
        p.cols = g.cols;
        detail::frame(p);
        for (int i = 0; i < g.dims().size(); ++i) p.labels[g.dims().at(i)] = g.value_exprs[i];
        return p;
    }
    }
    throw InvariantError("unknown gadget kind");
}

namespace detail {

inline char ascii_char(Ink ink, bool horizontal)
{
    switch (ink) {
    case Ink::grid: return horizontal ? '.' : ':';
    case Ink::forced:
    case Ink::forced_exit: return horizontal ? '=' : 'H';
    case Ink::path: return horizontal ? '~' : '$';
    default: return horizontal ? '-' : '|';
    }
}

} // namespace detail

// Cells are w characters wide and two lines high; w grows with the longest label.
inline std::string to_ascii(const Picture& p)
{
    size_t longest = 1;
    for (auto& [c, s] : p.labels) longest = std::max(longest, s.size());
    int w = std::max(4, static_cast<int>(longest) + 2);
    if (w % 2) ++w;
    int half = w / 2;
    int H = 2 * p.rows + 1, W = w * p.cols + 1;
    std::vector<std::string> canvas(H, std::string(W, ' '));
    auto put = [&](int x, int y, char ch) {
        if (y >= 0 && y < H && x >= 0 && x < W) canvas[y][x] = ch;
    };
    // light ink first so heavier ink overwrites it
    std::vector<const Stroke*> order;
    for (auto& s : p.strokes) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(), [](const Stroke* a, const Stroke* b) { return a->ink < b->ink; });
    for (const Stroke* s : order) {
        if (s->y1 == s->y2) {
            int a = std::min(s->x1, s->x2) * half, b = std::max(s->x1, s->x2) * half;
            for (int x = a; x <= b; ++x) put(x, s->y1, detail::ascii_char(s->ink, true));
        } else {
            int a = std::min(s->y1, s->y2), b = std::max(s->y1, s->y2);
            for (int y = a; y <= b; ++y) put(s->x1 * half, y, detail::ascii_char(s->ink, false));
        }
    }
    for (int r = 0; r <= p.rows; ++r)
        for (int c = 0; c <= p.cols; ++c)
            if (canvas[2 * r][c * w] != ' ' && canvas[2 * r][c * w] != '=' && canvas[2 * r][c * w] != 'H')
                canvas[2 * r][c * w] = '+';
    for (auto& [xy, m] : p.marks) put(xy.first * half, xy.second, m == Mark::dot ? '*' : 'o');
    for (auto& [c, s] : p.labels) {
        int x0 = (2 * c.col + 1) * half - static_cast<int>(s.size()) / 2;
        for (size_t i = 0; i < s.size(); ++i) put(x0 + static_cast<int>(i), 2 * c.row + 1, s[i]);
    }
    std::string out;
    for (auto& line : canvas) {
        auto end = line.find_last_not_of(' ');
        out += (end == std::string::npos ? std::string() : line.substr(0, end + 1)) + "\n";
    }
    return out;
}

namespace detail {

inline std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        if (ch == '&') out += "&amp;";
        else if (ch == '<') out += "&lt;";
        else if (ch == '>') out += "&gt;";
        else if (ch == '"') out += "&quot;";
        else out += ch;
    }
    return out;
}

struct InkStyle {
    const char* colour;
    int width;
};

inline InkStyle svg_style(Ink ink)
{
    switch (ink) {
    case Ink::grid: return {"#c8c8c8", 1};
    case Ink::wall: return {"#000000", 3};
    case Ink::forced: return {"#d62728", 4};
    case Ink::line: return {"#1f4fbf", 3};
    case Ink::path: return {"#1f4fbf", 3};
    case Ink::exit: return {"#606060", 2};
    case Ink::forced_exit: return {"#d62728", 3};
    }
    return {"#000000", 1};
}

inline const char* region_colour(int id)
{
    static const char* palette[] = {"#fde2c8", "#d7ecd9", "#d6e4f5", "#f3d6e8", "#f7f1c5", "#e2dcf2", "#cfeeee", "#ece3d4"};
    return palette[id % 8];
}

} // namespace detail

// 12 px per half unit, 12 px margin; integer coordinates only
inline std::string to_svg(const Picture& p)
{
    const int u = 12, m = 12;
    int W = 2 * p.cols * u + 2 * m, H = 2 * p.rows * u + 2 * m;
    auto X = [&](int x) { return m + x * u; };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << " " << H << "\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"#ffffff\"/>\n";
    if (!p.fill.empty())
        for (int r = 0; r < p.rows; ++r)
            for (int c = 0; c < p.cols; ++c)
                o << "<rect x=\"" << X(2 * c) << "\" y=\"" << X(2 * r) << "\" width=\"" << 2 * u << "\" height=\"" << 2 * u
                  << "\" fill=\"" << detail::region_colour(p.fill[r * p.cols + c]) << "\"/>\n";
    std::vector<const Stroke*> order;
    for (auto& s : p.strokes) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(), [](const Stroke* a, const Stroke* b) { return a->ink < b->ink; });
    for (const Stroke* s : order) {
        auto st = detail::svg_style(s->ink);
        o << "<line x1=\"" << X(s->x1) << "\" y1=\"" << X(s->y1) << "\" x2=\"" << X(s->x2) << "\" y2=\"" << X(s->y2)
          << "\" stroke=\"" << st.colour << "\" stroke-width=\"" << st.width << "\" stroke-linecap=\"round\"/>\n";
    }
    for (auto& [xy, mk] : p.marks)
        o << "<circle cx=\"" << X(xy.first) << "\" cy=\"" << X(xy.second) << "\" r=\"" << (mk == Mark::dot ? 4 : 2)
          << "\" fill=\"#000000\"/>\n";
    for (auto& [c, s] : p.labels)
        o << "<text x=\"" << X(2 * c.col + 1) << "\" y=\"" << X(2 * c.row + 1) + 4
          << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">" << detail::xml_escape(s) << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

inline std::string render(const Picture& p, Format f)
{
    if (f == Format::ascii) return to_ascii(p);
    if (f == Format::svg) return to_svg(p);
    throw ArgumentError("render supports ascii and svg only");
}

} // namespace tmc
