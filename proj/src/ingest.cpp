#include "womgraph/ingest.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "womgraph/error.hpp"

namespace womgraph {

using nlohmann::json;

std::string_view reaction_kind_name(ReactionKind kind) {
    switch (kind) {
    case ReactionKind::like_on_comment:
        return "like_on_comment";
    case ReactionKind::like:
        return "like";
    case ReactionKind::comment_reaction:
        return "comment";
    case ReactionKind::share:
        return "share";
    }
    return "unknown";
}

bool GroupActivityLog::has_user(std::string_view id) const {
    return std::binary_search(users_.begin(), users_.end(), id);
}

std::optional<std::size_t> GroupActivityLog::content_index(std::string_view id) const {
    auto it = content_index_.find(std::string(id));
    if (it == content_index_.end())
        return std::nullopt;
    return it->second;
}

const ContentItem &GroupActivityLog::content(std::string_view id) const {
    auto idx = content_index(id);
    if (!idx)
        throw InvalidArgument("unknown content id '" + std::string(id) + "'");
    return contents_[*idx];
}

bool is_valid_id(std::string_view id) {
    if (id.empty())
        return false;
    return std::none_of(id.begin(), id.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return u <= 0x20 || u == 0x7f;
    });
}

namespace {

void require_id(std::string_view id, std::size_t line_no, std::string_view field) {
    if (!is_valid_id(id))
        throw MalformedRecord(line_no, "field '" + std::string(field) +
                                           "' must be a nonempty id without whitespace");
}

void require_timestamp(Timestamp ts, std::size_t line_no) {
    if (ts < 0)
        throw MalformedRecord(line_no, "timestamp must be non-negative");
}

} // namespace

void LogBuilder::add_user(const UserId &id, std::size_t line_no) {
    require_id(id, line_no, "id");
    if (!explicit_users_.emplace(id, line_no).second)
        throw MalformedRecord(line_no, "duplicate user record '" + id + "'");
    users_.push_back(id);
}

void LogBuilder::add_post(const std::string &id, const UserId &author, std::string text,
                          Timestamp ts, std::size_t line_no) {
    require_id(id, line_no, "id");
    require_id(author, line_no, "author");
    require_timestamp(ts, line_no);
    if (!log_.content_index_.emplace(id, log_.contents_.size()).second)
        throw DuplicateContentId(line_no, id);
    log_.contents_.push_back({id, author, ContentKind::post, std::nullopt, std::move(text), ts});
    content_lines_.push_back(line_no);
    users_.push_back(author);
}

void LogBuilder::add_comment(const std::string &id, const UserId &author,
                             const std::string &parent, std::string text, Timestamp ts,
                             std::size_t line_no) {
    require_id(id, line_no, "id");
    require_id(author, line_no, "author");
    require_id(parent, line_no, "parent");
    require_timestamp(ts, line_no);
    if (!log_.content_index_.emplace(id, log_.contents_.size()).second)
        throw DuplicateContentId(line_no, id);
    log_.contents_.push_back({id, author, ContentKind::comment, parent, std::move(text), ts});
    content_lines_.push_back(line_no);
    log_.reactions_.push_back({author, parent, ReactionKind::comment_reaction, ts, id});
    reaction_lines_.push_back(line_no);
    users_.push_back(author);
}

void LogBuilder::add_reaction(ReactionKind kind, const UserId &reactor, const std::string &target,
                              Timestamp ts, std::size_t line_no) {
    if (kind == ReactionKind::comment_reaction)
        throw MalformedRecord(line_no, "comment reactions are created by comment records");
    require_id(reactor, line_no, "user");
    require_id(target, line_no, "target");
    require_timestamp(ts, line_no);
    log_.reactions_.push_back({reactor, target, kind, ts, std::nullopt});
    reaction_lines_.push_back(line_no);
    users_.push_back(reactor);
}

GroupActivityLog LogBuilder::build() && {
    auto &contents = log_.contents_;
    for (std::size_t i = 0; i < contents.size(); ++i) {
        const auto &item = contents[i];
        if (item.kind != ContentKind::comment)
            continue;
        auto parent = log_.content_index(*item.parent);
        if (!parent)
            throw DanglingReference(content_lines_[i], "comment '" + item.id + "'", *item.parent);
        if (contents[*parent].kind != ContentKind::post)
            throw MalformedRecord(content_lines_[i],
                                  "comment '" + item.id + "' must reply to a post");
    }
    for (std::size_t i = 0; i < log_.reactions_.size(); ++i) {
        const auto &r = log_.reactions_[i];
        if (r.kind == ReactionKind::comment_reaction)
            continue;
        auto target = log_.content_index(r.target);
        if (!target)
            throw DanglingReference(reaction_lines_[i],
                                    std::string(reaction_kind_name(r.kind)) + " by '" + r.reactor + "'",
                                    r.target);
        const bool on_comment = contents[*target].kind == ContentKind::comment;
        if (on_comment != (r.kind == ReactionKind::like_on_comment))
            throw MalformedRecord(reaction_lines_[i],
                                  on_comment ? "only like_on_comment may target a comment"
                                             : "like_on_comment must target a comment");
    }
    std::sort(users_.begin(), users_.end());
    users_.erase(std::unique(users_.begin(), users_.end()), users_.end());
    log_.users_ = std::move(users_);
    return std::move(log_);
}

namespace {

const std::set<std::string> &allowed_fields(const std::string &type) {
    static const std::set<std::string> user{"type", "id"};
    static const std::set<std::string> post{"type", "id", "author", "text", "timestamp"};
    static const std::set<std::string> comment{"type", "id", "author", "parent", "text",
                                               "timestamp"};
    static const std::set<std::string> reaction{"type", "user", "target", "timestamp"};
    if (type == "user")
        return user;
    if (type == "post")
        return post;
    if (type == "comment")
        return comment;
    return reaction;
}

std::string string_field(const json &rec, const char *name, std::size_t line_no) {
    auto it = rec.find(name);
    if (it == rec.end())
        throw MalformedRecord(line_no, std::string("missing field '") + name + "'");
    if (!it->is_string())
        throw MalformedRecord(line_no, std::string("field '") + name + "' must be a string");
    return it->get<std::string>();
}

Timestamp timestamp_field(const json &rec, std::size_t line_no) {
    auto it = rec.find("timestamp");
    if (it == rec.end())
        throw MalformedRecord(line_no, "missing field 'timestamp'");
    if (!it->is_number_integer())
        throw MalformedRecord(line_no, "field 'timestamp' must be an integer");
    return it->get<Timestamp>();
}

} // namespace

GroupActivityLog parse_activity_log(std::istream &in) {
    LogBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;

        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object())
            throw MalformedRecord(line_no, "not a JSON object");
        const std::string type = string_field(rec, "type", line_no);
        static const std::set<std::string> kTypes{"user", "post", "comment", "like",
                                                  "like_on_comment", "share"};
        if (!kTypes.contains(type))
            throw MalformedRecord(line_no, "unknown record type '" + type + "'");
        const auto &fields = allowed_fields(type);
        for (const auto &item : rec.items()) {
            if (!fields.contains(item.key()))
                throw MalformedRecord(line_no, "unexpected field '" + item.key() + "'");
        }

        if (type == "user") {
            builder.add_user(string_field(rec, "id", line_no), line_no);
        } else if (type == "post") {
            builder.add_post(string_field(rec, "id", line_no), string_field(rec, "author", line_no),
                             string_field(rec, "text", line_no), timestamp_field(rec, line_no),
                             line_no);
        } else if (type == "comment") {
            builder.add_comment(string_field(rec, "id", line_no),
                                string_field(rec, "author", line_no),
                                string_field(rec, "parent", line_no),
                                string_field(rec, "text", line_no), timestamp_field(rec, line_no),
                                line_no);
        } else {
            ReactionKind kind = type == "like"    ? ReactionKind::like
                                : type == "share" ? ReactionKind::share
                                                  : ReactionKind::like_on_comment;
            builder.add_reaction(kind, string_field(rec, "user", line_no),
                                 string_field(rec, "target", line_no),
                                 timestamp_field(rec, line_no), line_no);
        }
    }
    return std::move(builder).build();
}

void write_activity_log(std::ostream &out, const GroupActivityLog &log) {
    for (const auto &user : log.users())
        out << json{{"type", "user"}, {"id", user}}.dump() << '\n';

    const auto &contents = log.contents();
    std::size_t cursor = 0;
    auto emit_content = [&](const ContentItem &item) {
        json rec{{"type", item.kind == ContentKind::post ? "post" : "comment"},
                 {"id", item.id},
                 {"author", item.author},
                 {"text", item.text},
                 {"timestamp", item.timestamp}};
        if (item.parent)
            rec["parent"] = *item.parent;
        out << rec.dump() << '\n';
    };

    // A comment record yields both its content and its comment_reaction, so the two
    // sequences are interleaved back into record order here.
    for (const auto &r : log.reactions()) {
        if (r.kind == ReactionKind::comment_reaction) {
            auto idx = *log.content_index(*r.comment);
            while (cursor <= idx)
                emit_content(contents[cursor++]);
            continue;
        }
        // Posts go out as early as possible; comments wait for their reaction slot.
        while (cursor < contents.size() && contents[cursor].kind == ContentKind::post)
            emit_content(contents[cursor++]);
        out << json{{"type", std::string(reaction_kind_name(r.kind))},
                    {"user", r.reactor},
                    {"target", r.target},
                    {"timestamp", r.timestamp}}
                   .dump()
            << '\n';
    }
    while (cursor < contents.size())
        emit_content(contents[cursor++]);
}

} // namespace womgraph
