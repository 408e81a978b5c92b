package com.acme.netlab.model;

public class Frame {
    /** Fixed-size frame prefix. */
    public static class Header {
        public int size() {
            return 16;
        }
    }

    public Header header() {
        return new Header();
    }

    public int payloadLength() {
        return 0;
    }
}
