#include <stddef.h>
#include <string.h>

struct ring_buffer {
    unsigned char *data;
    size_t capacity;
    size_t head;
    size_t tail;
    size_t count;
};

static size_t ring_space(const struct ring_buffer *rb) {
    return rb->capacity - rb->count;
}

size_t ring_write(struct ring_buffer *rb, const unsigned char *src, size_t len) {
    size_t space = ring_space(rb);
    size_t n = len < space ? len : space;
    for (size_t i = 0; i < n; i++) {
        rb->data[rb->head] = src[i];
        rb->head = (rb->head + 1) % rb->capacity;
    }
    rb->count += n;
    return n;
}

size_t ring_read(struct ring_buffer *rb, unsigned char *dst, size_t len) {
    size_t n = len < rb->count ? len : rb->count;
    for (size_t i = 0; i < n; i++) {
        dst[i] = rb->data[rb->tail];
        rb->tail = (rb->tail + 1) % rb->capacity;
    }
    rb->count -= n;
    return n;
}
